#include <chrono>
#include <fstream>
#include <iostream>

#include <CLI11.hpp>
#include <json.hpp>

#include "daereg/exactla.hpp"
#include "daereg/io.hpp"
#include "daereg/models.hpp"
#include "daereg/onecm.hpp"
#include "daereg/transform.hpp"

using namespace daereg;

namespace {

// Exit codes: 0 regular, 1 usage/parse errors, 2 singular but structurally
// nonsingular, 3 structurally singular, 4 inconclusive (probe disagrees).
constexpr int kOk = 0, kUsage = 1, kSingular = 2, kStructSingular = 3, kInconclusive = 4;

struct Pipeline {
    DualPair duals;
    SymMatrix jac;
    LinSymMatrix lsm;
    OneCMMatrix onecm;
    OneCMRank rank;
};

std::optional<Pipeline> run_pipeline(const DaeSystem& dae) {
    auto duals = solve_dual(sigma_matrix(dae));
    if (!duals) return std::nullopt;
    Pipeline p;
    p.duals = *duals;
    p.jac = system_jacobian(dae, duals->p, duals->q);
    p.lsm = compress_symbols(to_linear_symbolic(p.jac));
    p.onecm = rank_one_split(p.lsm);
    p.rank = rank_1cm(p.onecm);
    return p;
}

nlohmann::json coefficient_census(const LinSymMatrix& lsm) {
    nlohmann::json arr = nlohmann::json::array();
    for (const auto& t : lsm.terms)
        arr.push_back({{"symbol", t.label}, {"atom", to_sexpr(t.atom)}, {"rank", rat_rank(t.coeff)}});
    return arr;
}

void write_or_print(const nlohmann::json& j, const std::string& path) {
    if (path.empty()) {
        std::cout << j.dump(2) << "\n";
    } else {
        std::ofstream f(path);
        if (!f) throw std::runtime_error("cannot write '" + path + "'");
        f << j.dump(2) << "\n";
    }
}

int cmd_analyze(const std::string& input, const std::string& format) {
    LoadedInput in = load_input(input);
    DaeSystem target = in.dae;
    std::optional<LayerForm> layer;
    if (in.decomposition) {
        layer = layer_form(in.dae, in.decomposition->first, in.decomposition->second);
        target = layer->dae;
    }
    SigmaMatrix sigma = sigma_matrix(target);
    auto pipe = run_pipeline(target);
    bool json_out = format == "json";
    nlohmann::json j;
    j["schema"] = 1;
    j["input"] = in.name;
    j["n"] = target.size();
    if (!pipe) {
        j["status"] = "StructurallySingular";
        if (json_out) {
            std::cout << j.dump(2) << "\n";
        } else {
            std::cout << "sigma matrix:\n" << sigma.to_string();
            std::cout << "structurally singular: no equation/variable correspondence\n";
        }
        return kStructSingular;
    }
    bool regular = pipe->rank.rank == target.size();
    j["dual_convention"] = "elementwise-smallest nonnegative optimal (p, q)";
    j["delta_hat"] = pipe->duals.delta_hat;
    j["p"] = pipe->duals.p;
    j["q"] = pipe->duals.q;
    j["lsm_symbols"] = pipe->lsm.terms.size();
    j["coefficients"] = coefficient_census(pipe->lsm);
    j["lsm"] = lsm_to_json(pipe->lsm);
    j["onecm"] = onecm_to_json(pipe->onecm);
    j["onecm_symbols"] = pipe->onecm.factors.size();
    j["rank_1cm"] = pipe->rank.rank;
    j["status"] = regular ? "Regular" : "Singular";
    if (layer) {
        auto tr = trank(layer->jm.support());
        j["layer_form"] = {{"n", target.size()},
                           {"jm_symbols", layer->symbol_count},
                           {"jm_term_rank", tr.trank}};
    }
    if (json_out) {
        std::cout << j.dump(2) << "\n";
    } else {
        std::cout << "input: " << in.name << (layer ? " (layer form, size " + std::to_string(target.size()) + ")" : "")
                  << "\n";
        std::cout << "sigma matrix:\n" << sigma.to_string();
        std::cout << "canonical duals (elementwise-smallest nonnegative optimum): p = [";
        for (size_t i = 0; i < pipe->duals.p.size(); ++i) std::cout << (i ? " " : "") << pipe->duals.p[i];
        std::cout << "], q = [";
        for (size_t i = 0; i < pipe->duals.q.size(); ++i) std::cout << (i ? " " : "") << pipe->duals.q[i];
        std::cout << "], delta_hat = " << pipe->duals.delta_hat << "\n";
        std::cout << "linear symbolic matrix: m = " << pipe->lsm.terms.size() << " symbols, coefficient ranks [";
        for (size_t i = 0; i < pipe->lsm.terms.size(); ++i)
            std::cout << (i ? " " : "") << rat_rank(pipe->lsm.terms[i].coeff);
        std::cout << "]\n";
        std::cout << "1CM matrix: m = " << pipe->onecm.factors.size() << " rank-one symbols\n";
        if (layer)
            std::cout << "layered-mixed approximation: " << layer->symbol_count << " symbols, term rank "
                      << trank(layer->jm.support()).trank << " of " << target.size() << "\n";
        std::cout << "rank of 1CM system Jacobian: " << pipe->rank.rank << " of " << target.size() << " -> "
                  << (regular ? "regular" : "identically singular approximation") << "\n";
    }
    return regular ? kOk : kSingular;
}

int cmd_regularize(const std::string& input, const std::string& out_path, const std::string& trace_path,
                   const std::string& retrieval_path, int max_iters, bool probe, unsigned long long seed,
                   const std::string& format) {
    LoadedInput in = load_input(input);
    DaeSystem target = in.dae;
    if (in.decomposition) target = layer_form(in.dae, in.decomposition->first, in.decomposition->second).dae;
    RegularizeOptions opts;
    opts.max_iters = max_iters;
    opts.probe = probe;
    opts.seed = seed;
    opts.evaluators = benchmark_evaluators();
    RegularizationResult res = regularize(target, opts);
    if (res.status == RegStatus::StructurallySingular) {
        std::cerr << "structurally singular; no output written\n";
        return kStructSingular;
    }
    nlohmann::json trace = trace_to_json(res, in.name);
    if (!trace_path.empty()) write_or_print(trace, trace_path);
    nlohmann::json out = dae_to_json(res.dae);
    out["trace"] = trace;
    write_or_print(out, out_path);
    if (!retrieval_path.empty()) {
        DaeSystem fstar = retrieval_system(res, target);
        write_or_print(dae_to_json(fstar), retrieval_path);
    }
    if (format == "text") {
        std::cerr << "status: " << trace["status"].get<std::string>() << ", iterations with transforms: "
                  << res.v_chain.size() << "\n";
    }
    return res.status == RegStatus::Regularized ? kOk : kInconclusive;
}

int cmd_bench(const std::string& preset, int n_from, int n_to, bool json_out) {
    if (preset != "robot") throw std::runtime_error("bench: only --preset robot is supported");
    nlohmann::json rows = nlohmann::json::array();
    for (int n = n_from; n <= n_to; ++n) {
        auto t0 = std::chrono::steady_clock::now();
        DaeSystem dae = robotic_arm(n);
        RegularizeOptions opts;
        opts.probe = false;
        RegularizationResult res = regularize(dae, opts);
        auto ms = std::chrono::duration_cast<std::chrono::milliseconds>(std::chrono::steady_clock::now() - t0).count();
        if (res.status != RegStatus::Regularized) throw std::runtime_error("bench: robot failed to regularize");
        nlohmann::json row;
        row["preset"] = "robot";
        row["N"] = n;
        row["n"] = dae.size();
        row["m"] = res.trace.front().onecm_symbols;
        row["delta_initial"] = res.trace.front().delta_hat;
        row["iterations"] = res.v_chain.size();
        row["millis"] = ms;
        rows.push_back(row);
        if (!json_out)
            std::cout << "robot N=" << n << "  n=" << dae.size() << "  m=" << res.trace.front().onecm_symbols
                      << "  delta=" << res.trace.front().delta_hat << "  iters=" << res.v_chain.size() << "  "
                      << ms << " ms\n";
    }
    if (json_out) std::cout << rows.dump(2) << "\n";
    return kOk;
}

int cmd_validate(const std::string& input, const std::string& pair_path, const std::string& format) {
    LoadedInput in = load_input(input);
    DaeSystem target = in.dae;
    if (in.decomposition) target = layer_form(in.dae, in.decomposition->first, in.decomposition->second).dae;
    std::ifstream f(pair_path);
    if (!f) throw ParseError("cannot open pair file '" + pair_path + "'");
    VanishingPair vp = pair_from_json(nlohmann::json::parse(f));
    SymMatrix jac = system_jacobian(target, vp.p, vp.q);
    OneCMMatrix a = rank_one_split(compress_symbols(to_linear_symbolic(jac)));
    PairValidation res = validate_vanishing_pair(a, vp.U, vp.V, vp.p, vp.q);
    if (format == "json") {
        nlohmann::json j{{"schema", 1}, {"input", in.name}, {"valid", res.ok}, {"trank", res.trank_uav}};
        if (!res.ok) j["reason"] = res.reason;
        std::cout << j.dump(2) << "\n";
    } else {
        if (res.ok) std::cout << "valid vanishing pair (term rank " << res.trank_uav << " < n)\n";
        else std::cout << "invalid: " << res.reason << "\n";
    }
    return res.ok ? kOk : kSingular;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Regularization of nonlinear DAEs via rank-1 coefficient mixed matrix approximation"};
    app.require_subcommand(1);
    app.fallthrough();
    std::string format = "text";
    unsigned long long seed = 20240817ULL;
    int max_iters = -1;
    bool probe = true;
    app.add_option("--format", format, "Output format: text or json")->check(CLI::IsMember({"text", "json"}));
    app.add_option("--seed", seed, "Seed for oracle substitutions");
    app.add_option("--max-iters", max_iters, "Safety cap on transform iterations (default delta_hat + 1)");
    app.add_flag("--probe,!--no-probe", probe, "Float-point diagnostic probe of the final Jacobian");

    std::string input, out_path, trace_path, retrieval_path, pair_path, preset = "robot", n_range = "1..10";
    bool bench_json = false;

    auto* analyze = app.add_subcommand("analyze", "Structural analysis and 1CM singularity test");
    analyze->add_option("input", input, "Preset name or DaeFile path")->required();

    auto* reg = app.add_subcommand("regularize", "Run the combinatorial-relaxation driver");
    reg->add_option("input", input, "Preset name or DaeFile path")->required();
    reg->add_option("--out", out_path, "Write the regularized DaeFile here (stdout if omitted)");
    reg->add_option("--trace", trace_path, "Write the JSON iteration trace here");
    reg->add_option("--retrieval", retrieval_path, "Also write the retrieval system f*");

    auto* bench = app.add_subcommand("bench", "Timing rows for a preset family");
    bench->add_option("--preset", preset, "Benchmark family");
    bench->add_option("--n-range", n_range, "Range a..b of the size parameter");
    bench->add_flag("--json", bench_json, "Emit JSON rows");

    auto* validate = app.add_subcommand("validate", "Check a vanishing pair against an input's 1CM matrix");
    validate->add_option("input", input, "Preset name or DaeFile path")->required();
    validate->add_option("pair", pair_path, "Vanishing pair JSON")->required();

    CLI11_PARSE(app, argc, argv);

    try {
        if (app.got_subcommand(analyze)) return cmd_analyze(input, format);
        if (app.got_subcommand(reg))
            return cmd_regularize(input, out_path, trace_path, retrieval_path, max_iters, probe, seed, format);
        if (app.got_subcommand(bench)) {
            auto dots = n_range.find("..");
            int lo = std::stoi(n_range.substr(0, dots));
            int hi = dots == std::string::npos ? lo : std::stoi(n_range.substr(dots + 2));
            return cmd_bench(preset, lo, hi, bench_json || format == "json");
        }
        if (app.got_subcommand(validate)) return cmd_validate(input, pair_path, format);
    } catch (const ParseError& e) {
        std::cerr << "parse error: " << e.what() << "\n";
        return kUsage;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kUsage;
    }
    return kUsage;
}
