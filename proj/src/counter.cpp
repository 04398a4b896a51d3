#include "arc/counter.hpp"

#include <algorithm>
#include <cmath>

namespace arc {

namespace {

constexpr std::uint64_t kProjectionTag = 1;
constexpr std::uint64_t kTreeTag = 2;
constexpr std::uint64_t kClassifierTag = 3;

std::size_t default_jl_dim(std::size_t n, std::size_t d, double eps) {
    const double e = eps / 10.0;
    const double raw = std::ceil(2.0 * std::log(static_cast<double>(std::max<std::size_t>(n, 2))) / (e * e));
    return std::min(d, std::max<std::size_t>(16, static_cast<std::size_t>(raw)));
}

double resolved_grid_side(const BuildConfig& cfg, std::size_t work_dim) {
    return cfg.grid_side.value_or(cfg.eps * cfg.radius / (10.0 * std::sqrt(static_cast<double>(work_dim))));
}

Point transform(PointView q, const std::optional<GaussianProjection>& proj, double rescale,
                const std::optional<GridSpec>& snap) {
    Point out = proj ? proj->apply(q) : Point(q.begin(), q.end());
    for (double& c : out) c *= rescale;
    if (snap) out = snap_to_grid(out, *snap);
    return out;
}

}  // namespace

void BuildConfig::validate() const {
    static_cast<void>(EpsParams{eps, radius});
    if (jl_target_dim && *jl_target_dim == 0) throw ContractViolation("jl_target_dim must be positive");
    if (grid_side && !(*grid_side > 0.0)) throw ContractViolation("grid_side must be positive");
    if (!(scan.cap_factor > 0.0) || !(scan.beta_scale >= 0.0)) throw ContractViolation("invalid scan options");
    if (const auto* ls = std::get_if<LearnedSource>(&tree_source)) {
        if (ls->queries.size() == 0 && ls->sample_size == 0) throw ContractViolation("learned source needs queries");
        if (!(ls->spread > 0.0)) throw ContractViolation("learned spread must be positive");
    }
}

WeightedPointSet working_points_for(const WeightedPointSet& pts, const BuildConfig& cfg,
                                    std::optional<GaussianProjection>* projection) {
    const std::size_t d = pts.dim();
    std::optional<GaussianProjection> proj;
    if (cfg.jl_enabled.value_or(d > 64)) {
        const std::size_t k = std::min(d, cfg.jl_target_dim.value_or(default_jl_dim(pts.size(), d, cfg.eps)));
        if (k < d) proj.emplace(d, k, derive(cfg.seed, kProjectionTag));
    }
    WeightedPointSet out = proj ? proj->apply(pts) : pts;
    if (cfg.snap_queries) out = scale_coordinates(out, 1.0 / (1.0 + cfg.eps / 5.0));
    if (projection) *projection = std::move(proj);
    return out;
}

SpanningPath build_spanning_path(const WeightedPointSet& pts, const BuildConfig& cfg,
                                 std::vector<std::uint64_t>* training_hashes) {
    cfg.validate();
    std::optional<GaussianProjection> proj;
    const WeightedPointSet working = working_points_for(pts, cfg, &proj);
    if (pts.size() == 1) return SpanningPath{{0}};

    const EpsParams wparams(0.5 * cfg.eps, cfg.radius);
    const double snap_side = resolved_grid_side(cfg, working.dim());
    const Seed seed = derive(cfg.seed, kTreeTag);

    SpanningTree tree;
    if (const auto* wc = std::get_if<WorstCaseSource>(&cfg.tree_source)) {
        QueryMultiset queries =
            generate_grid_queries(working, wparams, GridSpec(wc->query_grid_side.value_or(snap_side)), wc->dim_cap);
        const LightEdgeParams lp = wc->light.value_or(LightEdgeParams::defaults(wparams.eps));
        tree = build_low_stab_tree(working, queries, wparams, lp, seed);
    } else {
        const auto& ls = std::get<LearnedSource>(cfg.tree_source);
        QuerySample sample = ls.queries;
        if (sample.size() == 0) {
            const double scale = ls.spread * cfg.radius;
            switch (ls.kind) {
                case QueryKind::Uniform:
                    sample = uniform_queries(pts, ls.sample_size, scale, seed);
                    break;
                case QueryKind::NearData:
                    sample = near_data_queries(pts, ls.sample_size, scale, seed);
                    break;
                case QueryKind::Mixture: {
                    Rng rng(derive(seed, 1));
                    std::vector<Point> centers;
                    for (int c = 0; c < 8; ++c) {
                        auto p = pts.point(rng.below(pts.size()));
                        centers.emplace_back(p.begin(), p.end());
                    }
                    sample = gaussian_mixture_queries(centers, ls.sample_size,
                                                      scale / std::sqrt(static_cast<double>(pts.dim())),
                                                      derive(seed, 2));
                    break;
                }
            }
        }
        if (sample.dim() != pts.dim()) throw ContractViolation("query sample has wrong dimension");
        if (training_hashes) {
            training_hashes->clear();
            for (const auto& q : sample.queries) training_hashes->push_back(point_hash(q));
            std::sort(training_hashes->begin(), training_hashes->end());
        }
        const double rescale = cfg.snap_queries ? 1.0 / (1.0 + cfg.eps / 5.0) : 1.0;
        const std::optional<GridSpec> snap = cfg.snap_queries ? std::optional<GridSpec>(GridSpec(snap_side)) : std::nullopt;
        QuerySample working_sample;
        working_sample.source = sample.source;
        for (const auto& q : sample.queries) working_sample.queries.push_back(transform(q, proj, rescale, snap));
        tree = learned_spanning_tree(working, working_sample, wparams);
    }
    return tree_to_path(tree, working);
}

CountingIndex assemble_counting_index(const WeightedPointSet& pts, const BuildConfig& cfg, const SpanningPath& order) {
    cfg.validate();
    CountingIndex idx;
    idx.cfg_ = cfg;
    idx.ambient_dim_ = pts.dim();
    idx.working_ = working_points_for(pts, cfg, &idx.projection_);
    idx.rescale_ = cfg.snap_queries ? 1.0 / (1.0 + cfg.eps / 5.0) : 1.0;
    if (cfg.snap_queries) idx.snap_ = GridSpec(resolved_grid_side(cfg, idx.working_.dim()));
    idx.repetitions_ =
        cfg.classifier_repetitions > 0 ? cfg.classifier_repetitions : default_repetitions(pts.size());
    idx.data_digest_ = digest(pts);
    idx.tree_ = path_to_partition_tree(order, idx.working_);

    const auto shared = std::make_shared<const WeightedPointSet>(idx.working_);
    const EpsParams wparams = idx.working_params();
    for (std::size_t v = 0; v < idx.tree_.nodes.size(); ++v) {
        auto& node = idx.tree_.nodes[v];
        if (node.is_leaf()) continue;
        node.classifier = std::make_shared<const StabClassifier>(shared, idx.tree_.members(v), wparams,
                                                                 idx.repetitions_, derive(cfg.seed, kClassifierTag, v),
                                                                 cfg.scan);
    }
    return idx;
}

CountingIndex build_counting_index(const WeightedPointSet& pts, const BuildConfig& cfg) {
    std::vector<std::uint64_t> hashes;
    const SpanningPath order = build_spanning_path(pts, cfg, &hashes);
    CountingIndex idx = assemble_counting_index(pts, cfg, order);
    idx.training_hashes_ = std::move(hashes);
    return idx;
}

Point CountingIndex::transform_query(PointView q) const {
    if (q.size() != ambient_dim_) throw ContractViolation("query has wrong dimension");
    return transform(q, projection_, rescale_, snap_);
}

CountAnswer CountingIndex::count(PointView q, bool verify) const {
    const Point wq = transform_query(q);
    const double leaf_radius = (1.0 + working_eps()) * cfg_.radius;
    CountAnswer ans;
    std::vector<std::pair<std::uint32_t, std::uint32_t>> ranges;
    auto take = [&](const PNode& v) {
        ans.weight += v.cum_weight;
        if (!verify) return;
        if (!ranges.empty() && ranges.back().second == v.begin) {
            ranges.back().second = v.end;
        } else {
            ranges.emplace_back(v.begin, v.end);
        }
    };

    std::vector<std::size_t> stack{0};
    while (!stack.empty()) {
        const PNode& v = tree_.nodes[stack.back()];
        stack.pop_back();
        ++ans.visited_nodes;
        if (v.is_leaf()) {
            if (within(wq, working_.point(tree_.path.order[v.begin]), leaf_radius)) take(v);
            continue;
        }
        const Verdict verdict = v.classifier->classify(wq);
        ++ans.verdict_counts[static_cast<std::size_t>(verdict)];
        if (verdict == Verdict::Covered) {
            take(v);
        } else if (verdict == Verdict::Stabbed) {
            stack.push_back(static_cast<std::size_t>(v.right));
            stack.push_back(static_cast<std::size_t>(v.left));
        }
    }
    if (verify) ans.member_ranges = std::move(ranges);
    return ans;
}

std::vector<std::uint32_t> CountingIndex::members(const CountAnswer& a) const {
    if (!a.member_ranges) throw ContractViolation("answer was not computed in verification mode");
    std::vector<std::uint32_t> out;
    for (const auto& [b, e] : *a.member_ranges) {
        for (auto k = b; k < e; ++k) out.push_back(tree_.path.order[k]);
    }
    std::sort(out.begin(), out.end());
    return out;
}

std::size_t CountingIndex::entry_count() const {
    std::size_t total = 0;
    for (const auto& v : tree_.nodes) {
        if (v.classifier) total += v.classifier->entry_count();
    }
    return total;
}

}  // namespace arc
