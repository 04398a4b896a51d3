#include "arc/cli.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <fstream>
#include <iostream>
#include <numeric>
#include <sstream>

#include <CLI11.hpp>
#include <json.hpp>

#include "arc/counter.hpp"
#include "arc/io.hpp"
#include "arc/learned.hpp"
#include "arc/oracle.hpp"

namespace arc {

namespace {

using nlohmann::json;

constexpr int kMalformed = 2;
constexpr int kConfig = 3;

Point parse_query(const std::string& text, std::size_t d) {
    std::istringstream in(text);
    Point q;
    std::string tok;
    while (in >> tok) {
        std::size_t used = 0;
        double v = 0.0;
        try {
            v = std::stod(tok, &used);
        } catch (const std::exception&) {
            used = 0;
        }
        if (used != tok.size()) throw ContractViolation("query value is not a number: '" + tok + "'");
        q.push_back(v);
    }
    if (q.size() != d) {
        throw ContractViolation("query has " + std::to_string(q.size()) + " values, data has d = " + std::to_string(d));
    }
    return q;
}

json answer_json(const CountingIndex& idx, const CountAnswer& a) {
    json j = {{"weight", a.weight},
              {"visited_nodes", a.visited_nodes},
              {"verdicts",
               {{"stabbed", a.verdict_counts[0]}, {"covered", a.verdict_counts[1]}, {"disjoint", a.verdict_counts[2]}}}};
    if (a.member_ranges) {
        json ranges = json::array();
        for (const auto& [b, e] : *a.member_ranges) ranges.push_back({b, e});
        j["member_ranges"] = ranges;
        j["members"] = idx.members(a);
        double sum = 0.0;
        for (auto i : idx.members(a)) sum += idx.working_points().weight(i);
        j["member_weight"] = sum;
    }
    return j;
}

double percentile(std::vector<double> v, double p) {
    if (v.empty()) return 0.0;
    std::sort(v.begin(), v.end());
    const auto k = static_cast<std::size_t>(std::ceil(p * static_cast<double>(v.size()))) - 1;
    return v[std::min(k, v.size() - 1)];
}

}  // namespace

int run_cli(const std::vector<std::string>& argv, std::ostream& out, std::ostream& err) {
    CLI::App app{"approximate range counting with stab classifiers", argv.empty() ? "arc" : argv.front()};
    app.require_subcommand(1);

    // gen
    auto* gen = app.add_subcommand("gen", "generate a points file");
    std::string gen_kind = "uniform", gen_out;
    std::size_t gen_n = 0, gen_d = 0, gen_clusters = 8;
    std::uint64_t gen_seed = 0;
    double gen_side = 1.0, gen_spread = 0.1;
    bool gen_binary = false;
    gen->add_option("--kind", gen_kind)->check(CLI::IsMember({"uniform", "clusters", "grid"}));
    gen->add_option("--n", gen_n)->required()->check(CLI::PositiveNumber);
    gen->add_option("--d", gen_d)->required()->check(CLI::PositiveNumber);
    gen->add_option("--seed", gen_seed)->required();
    gen->add_option("--out", gen_out)->required();
    gen->add_option("--side", gen_side, "box side or lattice spacing");
    gen->add_option("--clusters", gen_clusters);
    gen->add_option("--spread", gen_spread, "per-coordinate cluster deviation");
    gen->add_flag("--binary", gen_binary);

    // gen-queries
    auto* genq = app.add_subcommand("gen-queries", "generate a query file");
    std::string gq_kind = "near-data", gq_out, gq_data;
    std::size_t gq_m = 0;
    std::uint64_t gq_seed = 0;
    double gq_spread = 1.0;
    bool gq_binary = false;
    genq->add_option("--kind", gq_kind)->check(CLI::IsMember({"uniform", "near-data", "file"}));
    genq->add_option("--m", gq_m)->required()->check(CLI::PositiveNumber);
    genq->add_option("--seed", gq_seed)->required();
    genq->add_option("--out", gq_out)->required();
    genq->add_option("--data", gq_data, "points file the queries are drawn around (or from, for --kind file)");
    genq->add_option("--spread", gq_spread, "offset scale (near-data) or box margin (uniform)");
    genq->add_flag("--binary", gq_binary);

    // build
    auto* build = app.add_subcommand("build", "build an index and save its model");
    std::string b_data, b_mode = "learned", b_queries, b_model;
    double b_eps = 0.5, b_radius = 1.0;
    std::optional<double> b_rho;
    std::size_t b_reps = 0, b_sample = 4096;
    std::optional<std::size_t> b_jl;
    bool b_snap = false;
    std::uint64_t b_seed = 0;
    build->add_option("--data", b_data)->required();
    build->add_option("--eps", b_eps)->required();
    build->add_option("--radius", b_radius);
    build->add_option("--mode", b_mode)->check(CLI::IsMember({"worstcase", "learned"}));
    build->add_option("--queries", b_queries, "training queries for --mode learned");
    build->add_option("--sample-size", b_sample, "generated training queries when --queries is absent");
    build->add_option("--rho", b_rho);
    build->add_option("--reps", b_reps, "classifier repetitions (0: ceil(3 log2 n))");
    build->add_flag("--snap", b_snap);
    build->add_option("--jl-dim", b_jl);
    build->add_option("--seed", b_seed)->required();
    build->add_option("--out-model", b_model)->required();

    // query
    auto* query = app.add_subcommand("query", "answer one query");
    std::string q_model, q_data, q_text;
    bool q_verify = false;
    query->add_option("--model", q_model)->required();
    query->add_option("--data", q_data)->required();
    query->add_option("--q", q_text)->required();
    query->add_flag("--verify", q_verify);

    // eval
    auto* eval = app.add_subcommand("eval", "evaluate an index on a query file");
    std::string e_model, e_data, e_queries, e_report;
    bool e_per_query = false;
    eval->add_option("--model", e_model)->required();
    eval->add_option("--data", e_data)->required();
    eval->add_option("--queries", e_queries)->required();
    eval->add_option("--out-report", e_report)->required();
    eval->add_flag("--per-query", e_per_query);

    // oracle
    auto* orc = app.add_subcommand("oracle", "exact range weights and ambiguity count");
    std::string o_data, o_text;
    double o_eps = 0.5, o_radius = 1.0;
    orc->add_option("--data", o_data)->required();
    orc->add_option("--q", o_text)->required();
    orc->add_option("--eps", o_eps)->required();
    orc->add_option("--radius", o_radius);

    try {
        std::vector<std::string> args(argv.size() > 1 ? argv.begin() + 1 : argv.end(), argv.end());
        std::reverse(args.begin(), args.end());
        app.parse(args);
    } catch (const CLI::CallForHelp&) {
        out << app.help();
        return 0;
    } catch (const CLI::ParseError& e) {
        err << e.what() << '\n';
        return kConfig;
    }

    const auto format_of = [](bool binary) { return binary ? PointsFormat::Binary : PointsFormat::Text; };

    try {
        if (*gen) {
            const DataKind kind = gen_kind == "uniform"    ? DataKind::Uniform
                                  : gen_kind == "clusters" ? DataKind::Clusters
                                                           : DataKind::Grid;
            const Dataset ds = generate_dataset(kind, gen_n, gen_d, Seed{gen_seed}, gen_side, gen_clusters, gen_spread);
            write_points_file(gen_out, ds.points, format_of(gen_binary));
            out << json{{"out", gen_out}, {"n", gen_n}, {"d", gen_d}, {"digest", digest(ds.points)}}.dump() << '\n';
        } else if (*genq) {
            if (gq_data.empty()) throw ContractViolation("gen-queries needs --data");
            const WeightedPointSet pts = read_points_file(gq_data);
            QuerySample qs;
            if (gq_kind == "uniform") {
                qs = uniform_queries(pts, gq_m, gq_spread, Seed{gq_seed});
            } else if (gq_kind == "near-data") {
                qs = near_data_queries(pts, gq_m, gq_spread, Seed{gq_seed});
            } else {
                std::vector<std::uint32_t> idx(pts.size());
                std::iota(idx.begin(), idx.end(), 0U);
                Rng rng(Seed{gq_seed});
                std::shuffle(idx.begin(), idx.end(), rng);
                idx.resize(std::min(gq_m, idx.size()));
                std::vector<Point> rows;
                for (auto i : idx) rows.emplace_back(pts.point(i).begin(), pts.point(i).end());
                qs = QuerySample(std::move(rows), "file:" + gq_data);
            }
            write_queries_file(gq_out, qs, format_of(gq_binary));
            out << json{{"out", gq_out}, {"m", qs.size()}, {"d", qs.dim()}}.dump() << '\n';
        } else if (*build) {
            const WeightedPointSet pts = read_points_file(b_data);
            BuildConfig cfg;
            cfg.eps = b_eps;
            cfg.radius = b_radius;
            cfg.snap_queries = b_snap;
            cfg.classifier_repetitions = b_reps;
            cfg.seed = Seed{b_seed};
            if (b_jl) {
                cfg.jl_enabled = true;
                cfg.jl_target_dim = *b_jl;
            }
            std::string training_digest;
            if (b_mode == "worstcase") {
                WorstCaseSource wc;
                if (b_rho) {
                    LightEdgeParams lp = LightEdgeParams::defaults(0.5 * b_eps);
                    lp.rho = *b_rho;
                    wc.light = lp;
                }
                cfg.tree_source = wc;
            } else {
                LearnedSource ls;
                ls.sample_size = b_sample;
                if (!b_queries.empty()) {
                    ls.queries = read_queries_file(b_queries);
                    training_digest = digest(ls.queries.as_points());
                }
                cfg.tree_source = ls;
            }
            const auto t0 = std::chrono::steady_clock::now();
            const CountingIndex idx = build_counting_index(pts, cfg);
            const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
            save_model(b_model, model_of(idx, training_digest));
            out << json{{"out_model", b_model},
                        {"n", pts.size()},
                        {"d", pts.dim()},
                        {"depth", idx.tree().depth()},
                        {"entries", idx.entry_count()},
                        {"build_seconds", secs}}
                       .dump()
                << '\n';
        } else if (*query) {
            const ModelFile m = load_model(q_model);
            const WeightedPointSet pts = read_points_file(q_data);
            const CountingIndex idx = rebuild_index(m, pts);
            const Point q = parse_query(q_text, pts.dim());
            out << answer_json(idx, idx.count(q, q_verify)).dump() << '\n';
        } else if (*eval) {
            const ModelFile m = load_model(e_model);
            const WeightedPointSet pts = read_points_file(e_data);
            const QuerySample qs = read_queries_file(e_queries);
            if (qs.dim() != pts.dim()) throw ContractViolation("queries and data differ in dimension");
            const auto t0 = std::chrono::steady_clock::now();
            const CountingIndex idx = rebuild_index(m, pts);
            const double build_secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();

            std::vector<double> micros;
            for (const auto& q : qs.queries) {
                const auto s = std::chrono::steady_clock::now();
                static_cast<void>(idx.count(q));
                micros.push_back(std::chrono::duration<double, std::micro>(std::chrono::steady_clock::now() - s).count());
            }
            const EpsParams params(m.config.eps, m.config.radius);
            EvalReport rep = evaluate_visiting(idx, qs, pts, params);
            if (!m.training_digest.empty() && digest(qs.as_points()) == m.training_digest) {
                rep.holdout_overlaps_training = true;
            }
            std::size_t oracle_agree = 0;
            for (std::size_t k = 0; k < qs.size(); ++k) {
                const Point wq = idx.transform_query(qs.queries[k]);
                const auto v = oracle::exact_visiting_oracle(idx.tree(), wq, idx.working_points(), idx.working_params());
                oracle_agree += v == rep.per_query[k].visiting ? 1 : 0;
            }
            json report = {{"n", pts.size()},
                           {"d", pts.dim()},
                           {"eps", m.config.eps},
                           {"tree_source",
                            std::holds_alternative<WorstCaseSource>(m.config.tree_source) ? "worstcase" : "learned"},
                           {"mean_visiting", rep.mean_visiting},
                           {"mean_tq", rep.mean_t_q},
                           {"sandwich_pass_rate", rep.sandwich_pass_rate},
                           {"oracle_visiting_agreement", static_cast<double>(oracle_agree) / static_cast<double>(qs.size())},
                           {"holdout_overlaps_training", rep.holdout_overlaps_training},
                           {"build_seconds", build_secs},
                           {"query_microseconds_p50", percentile(micros, 0.5)},
                           {"query_microseconds_p90", percentile(micros, 0.9)}};
            if (e_per_query) {
                json rows = json::array();
                for (const auto& e : rep.per_query) {
                    rows.push_back({{"visiting", e.visiting},
                                    {"t_q", e.t_q},
                                    {"correct", e.correct},
                                    {"visited_nodes", e.visited_nodes},
                                    {"weight", e.weight}});
                }
                report["per_query"] = rows;
            }
            std::ofstream f(e_report);
            if (!f) throw std::runtime_error("cannot write " + e_report);
            f << report.dump(2) << '\n';
            out << report.dump() << '\n';
        } else if (*orc) {
            const WeightedPointSet pts = read_points_file(o_data);
            const EpsParams params(o_eps, o_radius);
            const Point q = parse_query(o_text, pts.dim());
            out << json{{"weight_r", oracle::exact_range_weight(pts, q, params.radius)},
                        {"weight_outer", oracle::exact_range_weight(pts, q, params.outer_radius())},
                        {"t_q", oracle::exact_tq(pts, q, params)}}
                       .dump()
                << '\n';
        }
    } catch (const FormatError& e) {
        err << "error: " << e.what() << '\n';
        return kMalformed;
    } catch (const ContractViolation& e) {
        err << "error: " << e.what() << '\n';
        return kConfig;
    } catch (const InfeasibleError& e) {
        err << "error: " << e.what() << '\n';
        return kConfig;
    }
    return 0;
}

}  // namespace arc
