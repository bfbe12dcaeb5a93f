// lapdiag: approximate and exact Laplacian-pseudoinverse diagonals.
//
// Subcommands:
//   approx    randomized JL-sketch estimate of diag(L^+)
//   exact     dense oracle: diag, Kirchhoff index, node resistances, Foster
//   generate  koch / urt / psfw model networks (edge list + label sidecar)
//   compare   error metrics between an exact and an approx result file
//
// Exit codes: 0 ok, 2 usage/domain error, 3 numerical failure.

#include <CLI11.hpp>
#include <json.hpp>

#include <chrono>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>

#include "lapdiag/graph.hpp"
#include "lapdiag/models.hpp"
#include "lapdiag/oracle.hpp"
#include "lapdiag/sketch.hpp"
#include "lapdiag/solver.hpp"
#include "lapdiag/version.hpp"

using nlohmann::json;
using namespace lapdiag;

namespace {

constexpr int kExitOk = 0;
constexpr int kExitUsage = 2;
constexpr int kExitNumerical = 3;

double now_ms() {
    using clock = std::chrono::steady_clock;
    return std::chrono::duration<double, std::milli>(clock::now().time_since_epoch()).count();
}

std::string rational_string(const BigRational& r) {
    return numerator(r).str() + "/" + denominator(r).str();
}

struct GeneratorSpec {
    Family family;
    int g = 0;
    int f = 0;
};

// "koch:G", "urt:G:F", "psfw:G"
std::optional<GeneratorSpec> parse_generator_spec(const std::string& s) {
    const auto c1 = s.find(':');
    if (c1 == std::string::npos) return std::nullopt;
    const std::string name = s.substr(0, c1);
    Family family;
    if (name == "koch")
        family = Family::koch;
    else if (name == "urt")
        family = Family::urt;
    else if (name == "psfw")
        family = Family::psfw;
    else
        return std::nullopt;

    std::vector<int> args;
    std::size_t pos = c1 + 1;
    while (pos <= s.size()) {
        const auto next = s.find(':', pos);
        const std::string tok = s.substr(pos, next == std::string::npos ? next : next - pos);
        std::size_t used = 0;
        int value = 0;
        try {
            value = std::stoi(tok, &used);
        } catch (const std::exception&) {
            used = 0;
        }
        if (used != tok.size() || tok.empty())
            throw std::domain_error("bad generator spec \"" + s + "\": non-integer parameter");
        args.push_back(value);
        if (next == std::string::npos) break;
        pos = next + 1;
    }
    if (family == Family::urt) {
        if (args.size() != 2)
            throw std::domain_error("urt spec needs two parameters: urt:<g>:<f>");
        return GeneratorSpec{family, args[0], args[1]};
    }
    if (args.size() != 1)
        throw std::domain_error("generator spec \"" + s + "\" takes one parameter");
    return GeneratorSpec{family, args[0], 0};
}

struct LoadedInput {
    Graph graph;
    json descriptor;
    std::vector<std::string> notices;
    std::optional<LabeledGraph> generated;  // set when the input is a generator spec
};

LoadedInput load_input(const std::string& input, bool strict) {
    std::optional<LabeledGraph> generated;
    json descriptor;
    if (auto spec = parse_generator_spec(input)) {
        switch (spec->family) {
            case Family::koch: generated = koch_generate(spec->g); break;
            case Family::urt: generated = urt_generate(spec->g, spec->f); break;
            case Family::psfw: generated = psfw_generate(spec->g); break;
        }
        descriptor = {{"kind", "generator"}, {"spec", input}};
    } else {
        std::ifstream in(input);
        if (!in) throw std::domain_error("cannot open input file \"" + input + "\"");
        auto parsed = parse_edge_list(in);
        descriptor = {{"kind", "file"},
                      {"path", input},
                      {"duplicate_edges", parsed.duplicate_edges},
                      {"self_loops", parsed.self_loops}};
        LoadedInput li{std::move(parsed.graph), std::move(descriptor), {}, std::nullopt};
        if (li.graph.node_count() == 0) throw std::domain_error("input graph is empty");
        if (!li.graph.connected()) {
            if (strict) throw std::domain_error("input graph is disconnected (--strict)");
            const std::size_t before = li.graph.node_count();
            li.graph = li.graph.largest_connected_component();
            li.notices.push_back("disconnected input: extracted largest connected component (" +
                                 std::to_string(li.graph.node_count()) + " of " +
                                 std::to_string(before) + " nodes)");
        }
        return li;
    }
    LoadedInput li{generated->graph, std::move(descriptor), {}, std::nullopt};
    li.generated = std::move(generated);
    return li;
}

json make_manifest(const std::string& command, const json& descriptor, json config,
                   json timings) {
    return json{{"command", command},
                {"input", descriptor},
                {"config", std::move(config)},
                {"timings", std::move(timings)},
                {"version", kVersion}};
}

void emit(const json& result, const std::string& output_path) {
    if (output_path.empty()) {
        std::cout << result.dump(2) << "\n";
        return;
    }
    std::ofstream out(output_path);
    if (!out) throw std::domain_error("cannot open output file \"" + output_path + "\"");
    out << result.dump(2) << "\n";
}

void emit_text(const std::string& text, const std::string& output_path) {
    if (output_path.empty()) {
        std::cout << text;
        return;
    }
    std::ofstream out(output_path);
    if (!out) throw std::domain_error("cannot open output file \"" + output_path + "\"");
    out << text;
}

std::size_t dense_cap_default() {
    if (const char* env = std::getenv("LAPDIAG_DENSE_CAP")) {
        try {
            const long long v = std::stoll(env);
            if (v > 0) return static_cast<std::size_t>(v);
        } catch (const std::exception&) {
        }
        throw std::domain_error("LAPDIAG_DENSE_CAP must be a positive integer");
    }
    return kDefaultDenseCap;
}

std::string diag_csv(const std::vector<double>& diag) {
    std::string out = "node,diag\n";
    char buf[64];
    for (std::size_t i = 0; i < diag.size(); ++i) {
        std::snprintf(buf, sizeof(buf), "%zu,%.17g\n", i, diag[i]);
        out += buf;
    }
    return out;
}

int cmd_approx(const std::string& input, const std::string& output_path, double epsilon,
               std::uint64_t seed, int threads, bool strict, const std::string& format) {
    const double t0 = now_ms();
    auto li = load_input(input, strict);
    const double t_parse = now_ms();

    auto est = approx_diag(li.graph, epsilon, seed, threads);
    const double t_solve = now_ms();

    json result{{"n", li.graph.node_count()},
                {"m", li.graph.edge_count()},
                {"epsilon", est.epsilon},
                {"k", est.k},
                {"delta", est.delta},
                {"delta_clamped", est.delta_clamped},
                {"seed", est.seed},
                {"diag", est.values},
                {"kirchhoff", est.kirchhoff},
                {"solve_iterations", est.solve_iterations},
                {"elapsed_ms", t_solve - t0},
                {"fingerprint", li.graph.fingerprint()},
                {"notices", li.notices}};
    result["manifest"] = make_manifest(
        "approx", li.descriptor,
        json{{"epsilon", epsilon}, {"seed", seed}, {"threads", threads}, {"strict", strict}},
        json{{"parse_ms", t_parse - t0}, {"solve_ms", t_solve - t_parse},
             {"total_ms", t_solve - t0}});
    if (format == "csv")
        emit_text(diag_csv(est.values), output_path);
    else
        emit(result, output_path);
    return kExitOk;
}

int cmd_exact(const std::string& input, const std::string& output_path, std::size_t dense_cap,
              bool strict, const std::string& format) {
    const double t0 = now_ms();
    auto li = load_input(input, strict);
    const double t_parse = now_ms();

    auto diag = exact_pseudoinverse_diag(li.graph, dense_cap);
    auto node_res = node_resistance_distances(li.graph, dense_cap);
    const double kirchhoff = kirchhoff_exact(li.graph, dense_cap);
    const double foster = foster_check(li.graph, dense_cap);
    const double t_done = now_ms();

    json result{{"n", li.graph.node_count()},
                {"m", li.graph.edge_count()},
                {"diag", diag},
                {"kirchhoff", kirchhoff},
                {"node_resistance", node_res},
                {"foster_residual", foster - double(li.graph.node_count() - 1)},
                {"elapsed_ms", t_done - t0},
                {"fingerprint", li.graph.fingerprint()},
                {"notices", li.notices}};
    if (li.generated) {
        BigRational closed;
        switch (li.generated->family) {
            case Family::koch: closed = koch_kirchhoff(li.generated->generation); break;
            case Family::urt:
                closed = urt_kirchhoff(li.generated->generation, li.generated->fanout);
                break;
            case Family::psfw: closed = psfw_kirchhoff(li.generated->generation); break;
        }
        result["kirchhoff_closed_form"] = rational_string(closed);
    }
    result["manifest"] = make_manifest(
        "exact", li.descriptor, json{{"dense_cap", dense_cap}, {"strict", strict}},
        json{{"parse_ms", t_parse - t0}, {"compute_ms", t_done - t_parse},
             {"total_ms", t_done - t0}});
    if (format == "csv")
        emit_text(diag_csv(diag), output_path);
    else
        emit(result, output_path);
    return kExitOk;
}

int cmd_generate(const std::string& spec_text, const std::string& output_prefix) {
    auto spec = parse_generator_spec(spec_text);
    if (!spec)
        throw std::domain_error("expected a generator spec koch:<g>, urt:<g>:<f> or psfw:<g>");
    LabeledGraph lg = [&] {
        switch (spec->family) {
            case Family::koch: return koch_generate(spec->g);
            case Family::urt: return urt_generate(spec->g, spec->f);
            default: return psfw_generate(spec->g);
        }
    }();
    emit_text(lg.graph.serialize(), output_prefix.empty() ? "" : output_prefix + ".edges");
    if (!output_prefix.empty()) {
        emit_text(lg.serialize_labels(), output_prefix + ".labels");
        std::cerr << "wrote " << output_prefix << ".edges (" << lg.graph.node_count()
                  << " nodes, " << lg.graph.edge_count() << " edges) and " << output_prefix
                  << ".labels\n";
    }
    return kExitOk;
}

json load_result_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw std::domain_error("cannot open result file \"" + path + "\"");
    json j;
    try {
        in >> j;
    } catch (const json::exception& e) {
        throw std::domain_error("invalid JSON in \"" + path + "\": " + e.what());
    }
    for (const char* field : {"diag", "kirchhoff", "fingerprint", "n"})
        if (!j.contains(field))
            throw std::domain_error("result file \"" + path + "\" lacks field \"" +
                                    std::string(field) + "\"");
    return j;
}

int cmd_compare(const std::string& exact_path, const std::string& approx_path,
                const std::string& format) {
    json exact = load_result_file(exact_path);
    json approx = load_result_file(approx_path);
    if (exact["fingerprint"].get<std::uint64_t>() != approx["fingerprint"].get<std::uint64_t>())
        throw std::domain_error("graph fingerprints differ between the two result files");

    std::vector<double> exact_diag = exact["diag"].get<std::vector<double>>();
    DiagEstimate est;
    est.values = approx["diag"].get<std::vector<double>>();
    est.kirchhoff = approx["kirchhoff"].get<double>();
    if (exact_diag.size() != est.values.size())
        throw std::domain_error("diagonal lengths differ between the two result files");
    auto rep = error_metrics(exact_diag, est);
    if (format == "csv") {
        char buf[128];
        std::snprintf(buf, sizeof(buf), "sigma,sigma_max,rho\n%.17g,%.17g,%.17g\n", rep.sigma,
                      rep.sigma_max, rep.rho);
        std::cout << buf;
    } else {
        json out{{"sigma", rep.sigma}, {"sigma_max", rep.sigma_max}, {"rho", rep.rho},
                 {"n", rep.n}};
        std::cout << out.dump(2) << "\n";
    }
    return kExitOk;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Laplacian pseudoinverse diagonal estimator"};
    app.set_version_flag("--version", kVersion);
    app.require_subcommand(1);

    std::string input, output, format = "json";
    double epsilon = 0.3;
    std::uint64_t seed = 1;
    int threads = 1;
    bool strict = false;
    std::size_t dense_cap = 0;

    auto add_format = [&](CLI::App* sub) {
        sub->add_option("--format", format, "Output format")
            ->check(CLI::IsMember({"json", "csv"}));
    };

    auto* ap = app.add_subcommand("approx", "Randomized diagonal estimate");
    ap->add_option("input", input, "Edge-list file or generator spec (koch:g, urt:g:f, psfw:g)")
        ->required();
    ap->add_option("-o,--output", output, "Result file (stdout when omitted)");
    ap->add_option("--epsilon", epsilon, "Approximation parameter in (0, 1/2]")
        ->check(CLI::Range(1e-9, 0.5));
    ap->add_option("--seed", seed, "Sketch seed");
    ap->add_option("--threads", threads, "Sketch-row worker pool size")->check(CLI::Range(1, 256));
    ap->add_flag("--strict", strict, "Reject disconnected inputs instead of extracting the LCC");
    add_format(ap);

    auto* ex = app.add_subcommand("exact", "Dense oracle: diag, Kirchhoff, resistances, Foster");
    ex->add_option("input", input, "Edge-list file or generator spec")->required();
    ex->add_option("-o,--output", output, "Result file (stdout when omitted)");
    ex->add_option("--dense-cap", dense_cap, "Max N for the dense oracle");
    ex->add_flag("--strict", strict, "Reject disconnected inputs instead of extracting the LCC");
    add_format(ex);

    std::string out_prefix;
    auto* ge = app.add_subcommand("generate", "Write a model network and its label sidecar");
    ge->add_option("spec", input, "koch:<g>, urt:<g>:<f> or psfw:<g>")->required();
    ge->add_option("-o,--output", out_prefix,
                   "Output prefix; writes <prefix>.edges and <prefix>.labels");

    std::string exact_path, approx_path;
    auto* cp = app.add_subcommand("compare", "Error metrics between exact and approx results");
    cp->add_option("exact", exact_path, "Exact result JSON")->required();
    cp->add_option("approx", approx_path, "Approx result JSON")->required();
    add_format(cp);

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? kExitOk : kExitUsage;
    }

    try {
        if (*ap) return cmd_approx(input, output, epsilon, seed, threads, strict, format);
        if (*ex) {
            if (dense_cap == 0) dense_cap = dense_cap_default();
            return cmd_exact(input, output, dense_cap, strict, format);
        }
        if (*ge) return cmd_generate(input, out_prefix);
        if (*cp) return cmd_compare(exact_path, approx_path, format);
    } catch (const SolveFailure& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitNumerical;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitUsage;
    }
    return kExitUsage;
}
