// kaclab: experiment runner for return-time identities of measure-preserving
// group actions. Loads a JSON experiment config, runs the named verification,
// and writes machine-readable reports (JSON + optional CSV/SVG).
//
// Exit codes: 0 all verdicts pass, 1 a verdict failed, 2 abstention
// (budget exhausted before an answer was certain), 3 usage/config error.

#include "kaclab/allocation.hpp"
#include "kaclab/config.hpp"
#include "kaclab/errors.hpp"
#include "kaclab/estimate.hpp"
#include "kaclab/generator.hpp"
#include "kaclab/relation.hpp"
#include "kaclab/report.hpp"
#include "kaclab/svg.hpp"
#include "kaclab/voronoi.hpp"

#include "CLI11.hpp"

#include <filesystem>
#include <iostream>
#include <optional>
#include <string>

namespace {

using namespace kaclab;

constexpr int kExitPass = 0;
constexpr int kExitFail = 1;
constexpr int kExitAbstain = 2;
constexpr int kExitUsage = 3;

struct RunContext {
    std::string config_path;
    std::string out_dir = ".";
    std::optional<uint64_t> seed_override;
    std::optional<uint64_t> samples_override;
    std::optional<uint64_t> budget_override;
    bool quiet = false;
};

std::string out_path(const RunContext& ctx, const std::string& name) {
    std::filesystem::create_directories(ctx.out_dir);
    return (std::filesystem::path(ctx.out_dir) / name).string();
}

ExperimentConfig load(const RunContext& ctx, const std::string& expected_command) {
    ExperimentConfig cfg = load_config(ctx.config_path);
    if (cfg.command != expected_command)
        throw config_error("command: config says \"" + cfg.command + "\" but subcommand is \"" +
                           expected_command + "\"");
    if (ctx.seed_override) {
        cfg.seed = *ctx.seed_override;
        if (cfg.sampled) cfg.sampled->reseed(cfg.seed);
    }
    if (ctx.samples_override) cfg.samples = *ctx.samples_override;
    if (ctx.budget_override) cfg.budget = *ctx.budget_override;
    return cfg;
}

int finish_and_write(Report& rep, const RunContext& ctx, const ExperimentConfig& cfg) {
    rep.finish();
    std::string path = out_path(ctx, cfg.report_name);
    rep.write(path);
    if (!ctx.quiet) {
        for (const auto& v : rep.body["verdicts"])
            std::cout << (v.at("pass").get<bool>() ? "PASS " : "FAIL ")
                      << v.at("check").get<std::string>() << "\n";
        std::cout << "report: " << path << "\n";
    }
    return rep.passed() ? kExitPass : kExitFail;
}

Json cells_to_json(const std::vector<IVec>& cells, int dim) {
    Json arr = Json::array();
    for (const IVec& v : cells) {
        Json pt = Json::array();
        for (int i = 0; i < dim; ++i) pt.push_back(v[size_t(i)]);
        arr.push_back(std::move(pt));
    }
    return arr;
}

Json shape_to_json(const std::vector<GroupElement>& shape) {
    Json arr = Json::array();
    for (const GroupElement& g : shape) arr.push_back(g.v);
    return arr;
}

// --------------------------------------------------------------------------
// verify-kac
// --------------------------------------------------------------------------

int run_verify_kac(const RunContext& ctx) {
    ExperimentConfig cfg = load(ctx, "verify-kac");
    Report rep = make_report(cfg.command);
    rep.echo_inputs(cfg);

    if (cfg.finite) {
        const FiniteSystem& fs = *cfg.finite;
        FiniteSet A = parse_finite_set(cfg.at("A"), fs.size(), "A");
        if (!fs.is_sweep_out(A)) throw precondition_error("target set is not sweep-out");
        Rational integral = return_time_integral(fs, A);
        rep.set_exact("return_time_integral", integral);
        rep.set_exact("expected", Rational(1));
        rep.add_verdict("kac_identity_exact", integral == Rational(1));
        return finish_and_write(rep, ctx, cfg);
    }
    if (!cfg.sampled) throw config_error("system: required for verify-kac");
    const SampledSystem& ss = *cfg.sampled;
    SampledSet A = parse_sampled_set(cfg.at("A"), ss, "A");
    uint64_t budget = cfg.budget;
    Integrand f = [&](const SamplePoint& x) -> std::optional<double> {
        if (!ss.member(A, x)) return 0.0;
        auto r = return_time(ss, A, x, budget);
        if (!r) return std::nullopt;
        return double(*r);
    };
    McOptions opt;
    opt.abstain_threshold = cfg.abstain_threshold;
    Estimate est = mc_estimate(ss, f, cfg.samples, opt);
    rep.set_estimate("return_time_integral", est);
    rep.body["estimated"]["expected"] = 1.0;
    rep.add_verdict("kac_identity_3sigma", std::abs(est.mean - 1.0) <= 3.0 * est.std_error);
    return finish_and_write(rep, ctx, cfg);
}

// --------------------------------------------------------------------------
// verify-allocation
// --------------------------------------------------------------------------

FiniteAllocation make_allocation(const ExperimentConfig& cfg, const FiniteSystem& fs,
                                 const FiniteSet& A) {
    std::string strategy = "greedy";
    if (cfg.has("allocation")) {
        const Json& a = cfg.at("allocation");
        if (a.contains("strategy")) strategy = a.at("strategy").get<std::string>();
        if (strategy == "table") {
            const Json& tbl = a.at("table");
            if (!tbl.is_array() || tbl.size() != fs.size())
                throw config_error("allocation.table: one group element per point");
            std::vector<GroupElement> kappa;
            for (const auto& entry : tbl) {
                std::vector<int64_t> coords = entry.get<std::vector<int64_t>>();
                kappa.push_back(element(fs.group(), std::move(coords)));
            }
            return FiniteAllocation::from_table(fs, A, std::move(kappa));
        }
    }
    if (strategy == "greedy") return FiniteAllocation::greedy(fs, A);
    if (strategy == "forward-hitting") return FiniteAllocation::forward_hitting(fs, A);
    throw config_error("allocation.strategy: unknown strategy \"" + strategy + "\"");
}

int run_verify_allocation(const RunContext& ctx) {
    ExperimentConfig cfg = load(ctx, "verify-allocation");
    Report rep = make_report(cfg.command);
    rep.echo_inputs(cfg);

    if (cfg.finite) {
        const FiniteSystem& fs = *cfg.finite;
        FiniteSet A = parse_finite_set(cfg.at("A"), fs.size(), "A");
        FiniteAllocation alloc = make_allocation(cfg, fs, A);
        std::vector<Rational> f(fs.size(), Rational(1));
        if (cfg.has("f")) f = parse_rationals(cfg.at("f"), fs.size(), "f");
        AllocationIdentityReport r = verify_allocation_identity(alloc, f);
        rep.set_exact("f_kappa_integral", r.lhs);
        rep.set_exact("f_integral", r.rhs);
        rep.add_verdict("allocation_identity_exact", r.equal);
        return finish_and_write(rep, ctx, cfg);
    }
    if (!cfg.sampled) throw config_error("system: required for verify-allocation");
    const SampledSystem& ss = *cfg.sampled;
    SampledSet A = parse_sampled_set(cfg.at("A"), ss, "A");
    SampledAllocation alloc(ss, std::move(A));
    McOptions opt;
    opt.abstain_threshold = cfg.abstain_threshold;
    McIdentityReport r = verify_allocation_identity_mc(alloc, nullptr, cfg.samples, cfg.budget, opt);
    rep.set_estimate("cell_size_integral", r.lhs);
    rep.set_estimate("f_integral", r.rhs);
    rep.add_verdict("allocation_identity_3sigma", r.bands_overlap);
    return finish_and_write(rep, ctx, cfg);
}

// --------------------------------------------------------------------------
// kac-function
// --------------------------------------------------------------------------

int run_kac_function(const RunContext& ctx) {
    ExperimentConfig cfg = load(ctx, "kac-function");
    if (!cfg.finite) throw config_error("system: kac-function needs a finite system");
    const FiniteSystem& fs = *cfg.finite;
    FiniteSet A = parse_finite_set(cfg.at("A"), fs.size(), "A");
    FiniteAllocation alloc = make_allocation(cfg, fs, A);

    Report rep = make_report(cfg.command);
    rep.echo_inputs(cfg);

    KacFunction kf = kac_function(alloc);
    Json shapes = Json::array();
    for (const auto& s : kf.shapes) shapes.push_back(shape_to_json(s));
    rep.body["exact"]["shapes"] = std::move(shapes);
    Json phi = Json::object();
    for (size_t x = 0; x < fs.size(); ++x)
        if (kf.phi[x]) phi[std::to_string(x)] = *kf.phi[x] + 1; // 1-based in reports
    rep.body["exact"]["phi"] = std::move(phi);

    PartitionCheck pc = verify_translate_partition(alloc, kf);
    rep.add_verdict("translate_partition_disjoint", pc.disjoint);
    rep.add_verdict("translate_partition_exhaustive", pc.exhaustive);

    Rational integral = kac_cell_integral(alloc, kf);
    rep.set_exact("cell_size_integral", integral);
    rep.add_verdict("cell_size_integral_is_1", integral == Rational(1));

    std::vector<TailBoundRow> rows = tail_bound_check(alloc, kf);
    bool tails_ok = true;
    std::string csv = "n,measure,bound,ok\n";
    for (const TailBoundRow& row : rows) {
        tails_ok = tails_ok && row.ok;
        csv += std::to_string(row.n) + "," + row.measure.str() + "," + row.bound.str() + "," +
               (row.ok ? "1" : "0") + "\n";
    }
    rep.add_verdict("markov_tail_bounds", tails_ok);
    write_text_file(out_path(ctx, "tail_bounds.csv"), csv);

    std::string hist = "cell_size,count,mass\n";
    std::map<size_t, std::pair<size_t, Rational>> by_size;
    for (size_t x : alloc.target_positive().points()) {
        size_t sz = kf.shapes[*kf.phi[x]].size();
        auto& slot = by_size[sz];
        slot.first += 1;
        slot.second += fs.mass(x);
    }
    for (const auto& [sz, slot] : by_size)
        hist += std::to_string(sz) + "," + std::to_string(slot.first) + "," + slot.second.str() + "\n";
    write_text_file(out_path(ctx, "cell_sizes.csv"), hist);

    return finish_and_write(rep, ctx, cfg);
}

// --------------------------------------------------------------------------
// voronoi-cells
// --------------------------------------------------------------------------

int run_voronoi_cells(const RunContext& ctx) {
    ExperimentConfig cfg = load(ctx, "voronoi-cells");
    Report rep = make_report(cfg.command);
    rep.echo_inputs(cfg);

    HittingSet w;
    std::vector<IVec> cell_b;
    bool have_cell_b = false;

    if (cfg.has("W")) {
        const Json& jw = cfg.at("W");
        if (!jw.is_array() || jw.empty()) throw config_error("W: expected a non-empty array of vectors");
        size_t dim = jw[0].size();
        if (dim < 1 || dim > 3) throw config_error("W: dimension must be 1..3");
        w.dim = int(dim);
        int64_t max_n2 = 0;
        for (const auto& entry : jw) {
            std::vector<int64_t> coords = entry.get<std::vector<int64_t>>();
            if (coords.size() != dim) throw config_error("W: inconsistent vector dimensions");
            IVec v;
            for (size_t i = 0; i < dim; ++i) v[i] = coords[i];
            max_n2 = std::max(max_n2, norm2(v, w.dim));
            w.vectors.push_back(v);
        }
        w.radius2 = cfg.has("radius")
                        ? int64_t(cfg.at("radius").get<int64_t>()) * cfg.at("radius").get<int64_t>()
                        : max_n2;
        if (cfg.has("sandwich") && cfg.at("sandwich").get<bool>())
            throw config_error("sandwich: needs a finite system (the cell comes from its allocation)");
    } else if (cfg.finite) {
        const FiniteSystem& fs = *cfg.finite;
        FiniteSet A = parse_finite_set(cfg.at("A"), fs.size(), "A");
        size_t x = cfg.at("x").get<size_t>();
        int64_t radius = cfg.has("radius") ? cfg.at("radius").get<int64_t>() : 16;
        w = hitting_set(fs, A, x, radius);
        if (cfg.has("sandwich") && cfg.at("sandwich").get<bool>()) {
            FiniteAllocation alloc = FiniteAllocation::greedy(fs, A);
            for (const GroupElement& g : alloc.cell(x)) cell_b.push_back(from_element(g, w.dim));
            have_cell_b = true;
        }
    } else {
        throw config_error("voronoi-cells needs either \"W\" or a finite Z^d system with A and x");
    }

    VoronoiCells cells = voronoi_cells(w);
    rep.body["exact"]["dim"] = w.dim;
    rep.body["exact"]["n_hits"] = w.vectors.size();
    rep.body["exact"]["bounded"] = cells.bounded;
    if (cells.bounded) {
        rep.body["exact"]["closed_cell"] = cells_to_json(cells.closed_cell, w.dim);
        rep.body["exact"]["strict_cell"] = cells_to_json(cells.strict_cell, w.dim);
        rep.add_verdict("strict_subset_of_closed",
                        cells.strict_cell.size() <= cells.closed_cell.size());
    } else {
        rep.body["exact"]["recession_directions"] = cells_to_json(cells.recession, w.dim);
        rep.add_verdict("bounded_cell", false);
    }

    if (have_cell_b) {
        rep.body["exact"]["cell_b"] = cells_to_json(cell_b, w.dim);
        SandwichReport sr = sandwich_check(w, cell_b);
        if (sr.verdict == SandwichReport::Verdict::inconclusive)
            throw abstention_error("sandwich inconclusive: " + sr.note);
        rep.add_verdict("voronoi_sandwich", sr.verdict == SandwichReport::Verdict::holds);
        rep.add_verdict("cell_almost_convex", is_almost_convex(w.dim, cell_b));
    }

    if (w.dim == 2) {
        std::string svg_name = cfg.has("svg") ? cfg.at("svg").get<std::string>() : "cells.svg";
        write_text_file(out_path(ctx, svg_name), render_cell_svg(w, cells, cell_b));
    }
    return finish_and_write(rep, ctx, cfg);
}

// --------------------------------------------------------------------------
// relation-check
// --------------------------------------------------------------------------

int run_relation_check(const RunContext& ctx) {
    ExperimentConfig cfg = load(ctx, "relation-check");
    Report rep = make_report(cfg.command);
    rep.echo_inputs(cfg);

    if (cfg.finite) {
        // bridge mode: orbit relation of the system, tau realized as an allocation
        const FiniteSystem& fs = *cfg.finite;
        EquivRelation rel = orbit_relation(fs);
        TauMap tau = parse_tau(cfg.at("tau"), fs.size(), "tau");
        std::vector<Rational> f(fs.size(), Rational(1));
        if (cfg.has("f")) f = parse_rationals(cfg.at("f"), fs.size(), "f");

        RelationKacReport rr = verify_relation_kac(rel, tau, f);
        rep.set_exact("f_integral", rr.f_integral);
        rep.set_exact("f_tau_integral", rr.f_tau_integral);
        rep.set_exact("preimage_integral", rr.preimage_integral);
        rep.add_verdict("transport_identity_exact", rr.transport_equal);
        rep.add_verdict("preimage_expectation_is_1", rr.preimage_is_one);

        auto [A, alloc] = tau_to_allocation(fs, tau);
        AllocationIdentityReport ar = verify_allocation_identity(alloc, f);
        rep.set_exact("bridge_f_kappa_integral", ar.lhs);
        rep.add_verdict("bridge_coherent",
                        ar.lhs == rr.f_tau_integral && ar.rhs == rr.f_integral && ar.equal);
        return finish_and_write(rep, ctx, cfg);
    }

    EquivRelation rel = parse_relation(cfg.at("relation"), "relation");
    RelationVerdict v = validate_relation(rel);
    rep.add_verdict("relation_valid", v.valid);
    if (!v.valid) {
        rep.body["exact"]["rejection"] = v.detail;
        return finish_and_write(rep, ctx, cfg);
    }
    TauMap tau = parse_tau(cfg.at("tau"), rel.size(), "tau");
    std::vector<Rational> f(rel.size(), Rational(1));
    if (cfg.has("f")) f = parse_rationals(cfg.at("f"), rel.size(), "f");
    RelationKacReport rr = verify_relation_kac(rel, tau, f);
    rep.set_exact("f_integral", rr.f_integral);
    rep.set_exact("f_tau_integral", rr.f_tau_integral);
    rep.set_exact("preimage_integral", rr.preimage_integral);
    rep.add_verdict("transport_identity_exact", rr.transport_equal);
    rep.add_verdict("preimage_expectation_is_1", rr.preimage_is_one);
    return finish_and_write(rep, ctx, cfg);
}

// --------------------------------------------------------------------------
// generator-demo
// --------------------------------------------------------------------------

int run_generator_demo(const RunContext& ctx) {
    ExperimentConfig cfg = load(ctx, "generator-demo");
    Report rep = make_report(cfg.command);
    rep.echo_inputs(cfg);

    Rational eps = parse_rational_field(cfg.at("epsilon"), "epsilon");

    if (cfg.sampled) {
        int n_max = cfg.has("n_max") ? cfg.at("n_max").get<int>() : 20;
        SampledSweepOutPartition part = sweep_out_partition(*cfg.sampled, eps, n_max);
        Json measures = Json::array();
        bool all_exact = true;
        for (int n = 1; n <= n_max; ++n) {
            Rational expected = eps / Rational(int64_t(1) << n);
            Rational actual = exact_measure(part.pieces[size_t(n - 1)]);
            measures.push_back(actual.str());
            all_exact = all_exact && actual == expected && actual == part.piece_measures[size_t(n - 1)];
        }
        rep.body["exact"]["piece_measures"] = std::move(measures);
        rep.set_exact("residual", part.residual);
        rep.add_verdict("piece_measures_exact", all_exact);
        rep.add_verdict("residual_is_eps_tail",
                        part.residual == eps / Rational(int64_t(1) << n_max));
        return finish_and_write(rep, ctx, cfg);
    }

    if (!cfg.finite) throw config_error("system: required for generator-demo");
    const FiniteSystem& fs = *cfg.finite;
    FiniteSweepOutPartition part = sweep_out_partition(fs, eps);
    Json pieces = Json::array();
    bool pieces_sweep = true;
    for (const FiniteSet& p : part.pieces) {
        pieces.push_back(p.points());
        pieces_sweep = pieces_sweep && fs.is_sweep_out(p);
    }
    rep.body["exact"]["pieces"] = std::move(pieces);
    rep.set_exact("residual", part.residual);
    rep.add_verdict("pieces_sweep_out", pieces_sweep);

    if (!cfg.has("targets")) return finish_and_write(rep, ctx, cfg);

    const Json& targets = cfg.at("targets");
    if (!targets.is_array() || targets.empty())
        throw config_error("targets: expected a non-empty array of point sets");
    size_t k = targets.size();
    if (k > part.pieces.size())
        throw config_error("targets: more targets than sweep-out pieces (" +
                           std::to_string(part.pieces.size()) + " available)");

    std::vector<FiniteAllocation> allocs;
    std::vector<const FiniteAllocation*> alloc_ptrs;
    std::vector<FiniteSet> sets;
    for (size_t n = 0; n < k; ++n) {
        allocs.push_back(FiniteAllocation::greedy(fs, part.pieces[n]));
        sets.push_back(parse_finite_set(targets[n], fs.size(), "targets[" + std::to_string(n) + "]"));
    }
    for (const auto& a : allocs) alloc_ptrs.push_back(&a);

    GeneratorPartition gp = generator_partition(fs, alloc_ptrs, sets);
    Json blocks = Json::array();
    for (const auto& [fp, block] : gp.blocks)
        blocks.push_back(Json{{"fingerprint", fp.str()}, {"points", block.points()}});
    rep.body["exact"]["blocks"] = std::move(blocks);

    bool all_equal = true;
    Json recon = Json::array();
    for (size_t n = 0; n < k; ++n) {
        ReconstructionReport rr = reconstruct_and_verify(fs, gp, alloc_ptrs, sets, n);
        recon.push_back(Json{{"n", n + 1},
                             {"reconstructed", rr.reconstructed.points()},
                             {"symmetric_diff_mass", rr.symmetric_diff_mass.str()}});
        all_equal = all_equal && rr.equal_mod_mu;
    }
    rep.body["exact"]["reconstruction"] = std::move(recon);
    rep.add_verdict("reconstruction_exact", all_equal);
    return finish_and_write(rep, ctx, cfg);
}

// --------------------------------------------------------------------------
// census
// --------------------------------------------------------------------------

int run_census(const RunContext& ctx) {
    ExperimentConfig cfg = load(ctx, "census");
    Report rep = make_report(cfg.command);
    rep.echo_inputs(cfg);

    if (cfg.sampled) {
        rep.body["exact"]["orbits"] = "infinite by construction";
        rep.add_verdict("census_computed", true);
        return finish_and_write(rep, ctx, cfg);
    }
    if (!cfg.finite) throw config_error("system: required for census");
    OrbitCensus census = finite_orbit_census(*cfg.finite);
    Json rows = Json::array();
    for (const OrbitCensusRow& row : census.rows)
        rows.push_back(Json{{"orbit", row.orbit}, {"size", row.size}, {"mass", row.mass.str()}});
    rep.body["exact"]["orbits"] = std::move(rows);
    rep.body["exact"]["all_positive_orbits_finite"] = census.all_positive_orbits_finite;
    rep.add_verdict("census_computed", true);
    return finish_and_write(rep, ctx, cfg);
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"kaclab: verification workbench for return-time identities of "
                 "measure-preserving group actions"};
    app.require_subcommand(1);

    RunContext ctx;
    int (*runner)(const RunContext&) = nullptr;

    auto add_common = [&](CLI::App* sub, int (*fn)(const RunContext&)) {
        sub->add_option("--config", ctx.config_path, "experiment config (JSON)")->required();
        sub->add_option("--out", ctx.out_dir, "output directory for reports");
        sub->add_option("--seed", ctx.seed_override, "override the config seed");
        sub->add_option("--samples", ctx.samples_override, "override the sample count");
        sub->add_option("--budget", ctx.budget_override, "override the evaluation budget");
        sub->add_flag("--quiet", ctx.quiet, "suppress progress output");
        sub->callback([&runner, fn] { runner = fn; });
    };

    add_common(app.add_subcommand("verify-kac", "exact or statistical return-time identity"),
               &run_verify_kac);
    add_common(app.add_subcommand("verify-allocation", "allocation transport identity"),
               &run_verify_allocation);
    add_common(app.add_subcommand("kac-function", "cell shapes, tiling check, tail bounds"),
               &run_kac_function);
    add_common(app.add_subcommand("voronoi-cells", "lattice Voronoi cells, sandwich check, SVG"),
               &run_voronoi_cells);
    add_common(app.add_subcommand("relation-check", "equivalence-relation transport identity"),
               &run_relation_check);
    add_common(app.add_subcommand("generator-demo", "sweep-out pieces, fingerprints, reconstruction"),
               &run_generator_demo);
    add_common(app.add_subcommand("census", "orbit census"), &run_census);

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        int rc = app.exit(e);
        return rc == 0 ? 0 : kExitUsage;
    }

    try {
        return runner(ctx);
    } catch (const abstention_error& e) {
        std::cerr << "abstain: " << e.what() << "\n";
        return kExitAbstain;
    } catch (const config_error& e) {
        std::cerr << "config error: " << e.what() << "\n";
        return kExitUsage;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitUsage;
    }
}
