#include "arc/io.hpp"

#include <bit>
#include <cmath>
#include <cstdlib>
#include <cstring>
#include <fstream>
#include <iterator>
#include <sstream>
#include <vector>

#include <json.hpp>

namespace arc {

namespace {

using nlohmann::json;

constexpr char kMagic[4] = {'A', 'R', 'C', '1'};

template <typename T>
T from_le(const unsigned char* b) {
    T v{};
    std::memcpy(&v, b, sizeof(T));
    if constexpr (std::endian::native == std::endian::big) {
        unsigned char tmp[sizeof(T)];
        std::memcpy(tmp, &v, sizeof(T));
        for (std::size_t i = 0; i < sizeof(T) / 2; ++i) std::swap(tmp[i], tmp[sizeof(T) - 1 - i]);
        std::memcpy(&v, tmp, sizeof(T));
    }
    return v;
}

template <typename T>
void put_le(std::ostream& out, T v) {
    unsigned char b[sizeof(T)];
    std::memcpy(b, &v, sizeof(T));
    if constexpr (std::endian::native == std::endian::big) {
        for (std::size_t i = 0; i < sizeof(T) / 2; ++i) std::swap(b[i], b[sizeof(T) - 1 - i]);
    }
    out.write(reinterpret_cast<const char*>(b), sizeof(T));
}

bool blank(const std::string& s) {
    return s.find_first_not_of(" \t\r") == std::string::npos;
}

[[noreturn]] void bad_line(std::size_t line, const std::string& what) {
    throw FormatError("line " + std::to_string(line) + ": " + what);
}

WeightedPointSet read_text(std::istream& in) {
    std::string line;
    std::size_t lineno = 0;
    std::size_t n = 0, d = 0;
    while (std::getline(in, line)) {
        ++lineno;
        if (blank(line)) continue;
        std::istringstream hs(line);
        std::string tag, ver, extra;
        long long nn = -1, dd = -1;
        if (!(hs >> tag >> ver >> nn >> dd) || tag != "arc-points" || ver != "v1" || (hs >> extra)) {
            bad_line(lineno, "expected header 'arc-points v1 <n> <d>'");
        }
        if (nn <= 0 || dd <= 0 || nn > (1LL << 32) || dd > (1LL << 32)) bad_line(lineno, "n and d must be positive");
        n = static_cast<std::size_t>(nn);
        d = static_cast<std::size_t>(dd);
        break;
    }
    if (n == 0) throw FormatError("line " + std::to_string(lineno + 1) + ": missing header");

    std::vector<double> coords;
    std::vector<double> weights;
    coords.reserve(n * d);
    weights.reserve(n);
    std::string tok;
    while (std::getline(in, line)) {
        ++lineno;
        if (blank(line)) continue;
        if (weights.size() == n) bad_line(lineno, "more rows than the header declares");
        std::istringstream ls(line);
        std::size_t count = 0;
        while (ls >> tok) {
            char* end = nullptr;
            const double v = std::strtod(tok.c_str(), &end);
            if (end == tok.c_str() || *end != '\0') bad_line(lineno, "not a number: '" + tok + "'");
            if (!std::isfinite(v)) bad_line(lineno, "value is not finite");
            if (count < d) {
                coords.push_back(v);
            } else if (count == d) {
                weights.push_back(v);
            }
            ++count;
        }
        if (count != d + 1) {
            bad_line(lineno, "expected " + std::to_string(d + 1) + " values, found " + std::to_string(count));
        }
    }
    if (weights.size() != n) {
        bad_line(lineno + 1, "expected " + std::to_string(n) + " rows, found " + std::to_string(weights.size()));
    }
    return WeightedPointSet(d, std::move(coords), std::move(weights));
}

WeightedPointSet read_binary(std::istream& in) {
    const std::vector<unsigned char> bytes((std::istreambuf_iterator<char>(in)), std::istreambuf_iterator<char>());
    if (bytes.size() < 12) throw FormatError("offset " + std::to_string(bytes.size()) + ": truncated header");
    const auto n = from_le<std::uint32_t>(bytes.data() + 4);
    const auto d = from_le<std::uint32_t>(bytes.data() + 8);
    if (n == 0) throw FormatError("offset 4: n must be positive");
    if (d == 0) throw FormatError("offset 8: d must be positive");
    const std::size_t values = static_cast<std::size_t>(n) * (d + 1);
    const std::size_t expected = 12 + values * 8;
    if (bytes.size() < expected) throw FormatError("offset " + std::to_string(bytes.size()) + ": truncated body");
    if (bytes.size() > expected) throw FormatError("offset " + std::to_string(expected) + ": trailing bytes");
    std::vector<double> coords;
    std::vector<double> weights;
    coords.reserve(static_cast<std::size_t>(n) * d);
    weights.reserve(n);
    for (std::size_t k = 0; k < values; ++k) {
        const std::size_t off = 12 + 8 * k;
        const double v = from_le<double>(bytes.data() + off);
        if (!std::isfinite(v)) throw FormatError("offset " + std::to_string(off) + ": value is not finite");
        if (k % (d + 1) == d) {
            weights.push_back(v);
        } else {
            coords.push_back(v);
        }
    }
    return WeightedPointSet(d, std::move(coords), std::move(weights));
}

}  // namespace

WeightedPointSet read_points(std::istream& in) {
    char head[4] = {};
    in.read(head, 4);
    const auto got = static_cast<std::size_t>(in.gcount());
    const bool binary = got == 4 && std::memcmp(head, kMagic, 4) == 0;
    if (binary) return read_binary(in.seekg(0));
    in.clear();
    in.seekg(0);
    return read_text(in);
}

WeightedPointSet read_points_file(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw FormatError("cannot open " + path);
    return read_points(in);
}

void write_points(std::ostream& out, const WeightedPointSet& pts, PointsFormat format) {
    const std::size_t d = pts.dim();
    if (format == PointsFormat::Binary) {
        out.write(kMagic, 4);
        put_le(out, static_cast<std::uint32_t>(pts.size()));
        put_le(out, static_cast<std::uint32_t>(d));
        for (std::size_t i = 0; i < pts.size(); ++i) {
            for (double c : pts.point(i)) put_le(out, c);
            put_le(out, pts.weight(i));
        }
        return;
    }
    out << "arc-points v1 " << pts.size() << ' ' << d << '\n';
    char buf[32];
    for (std::size_t i = 0; i < pts.size(); ++i) {
        for (double c : pts.point(i)) {
            std::snprintf(buf, sizeof buf, "%.17g", c);
            out << buf << ' ';
        }
        std::snprintf(buf, sizeof buf, "%.17g", pts.weight(i));
        out << buf << '\n';
    }
}

void write_points_file(const std::string& path, const WeightedPointSet& pts, PointsFormat format) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw std::runtime_error("cannot write " + path);
    write_points(out, pts, format);
    if (!out) throw std::runtime_error("write failed: " + path);
}

QuerySample read_queries_file(const std::string& path) {
    const WeightedPointSet pts = read_points_file(path);
    std::vector<Point> qs;
    qs.reserve(pts.size());
    for (std::size_t i = 0; i < pts.size(); ++i) qs.emplace_back(pts.point(i).begin(), pts.point(i).end());
    return {std::move(qs), "file:" + path};
}

void write_queries_file(const std::string& path, const QuerySample& qs, PointsFormat format) {
    write_points_file(path, qs.as_points(), format);
}

namespace {

const char* query_kind_name(QueryKind k) {
    switch (k) {
        case QueryKind::Uniform:
            return "uniform";
        case QueryKind::NearData:
            return "near-data";
        case QueryKind::Mixture:
            return "mixture";
    }
    return "near-data";
}

QueryKind query_kind_of(const std::string& s) {
    if (s == "uniform") return QueryKind::Uniform;
    if (s == "near-data") return QueryKind::NearData;
    if (s == "mixture") return QueryKind::Mixture;
    throw FormatError("unknown query kind '" + s + "'");
}

template <typename T>
json optional_json(const std::optional<T>& v) {
    return v ? json(*v) : json(nullptr);
}

template <typename T>
std::optional<T> optional_of(const json& j, const char* key) {
    if (!j.contains(key) || j.at(key).is_null()) return std::nullopt;
    return j.at(key).get<T>();
}

json config_json(const BuildConfig& c) {
    json src;
    if (const auto* wc = std::get_if<WorstCaseSource>(&c.tree_source)) {
        src["kind"] = "worstcase";
        src["query_grid_side"] = optional_json(wc->query_grid_side);
        src["dim_cap"] = wc->dim_cap;
        if (wc->light) {
            src["light"] = {{"rho", wc->light->rho},
                            {"net_constant", wc->light->net_constant},
                            {"embed_dim_constant", wc->light->embed_dim_constant},
                            {"grid_divisor", wc->light->grid_divisor},
                            {"fallback_pairs", wc->light->fallback_pairs},
                            {"max_candidates", wc->light->max_candidates}};
        } else {
            src["light"] = nullptr;
        }
    } else {
        const auto& ls = std::get<LearnedSource>(c.tree_source);
        src["kind"] = "learned";
        src["query_kind"] = query_kind_name(ls.kind);
        src["sample_size"] = ls.sample_size;
        src["spread"] = ls.spread;
        src["explicit_queries"] = ls.queries.size();
    }
    return {{"eps", c.eps},
            {"radius", c.radius},
            {"jl_enabled", optional_json(c.jl_enabled)},
            {"jl_target_dim", optional_json(c.jl_target_dim)},
            {"snap_queries", c.snap_queries},
            {"grid_side", optional_json(c.grid_side)},
            {"classifier_repetitions", c.classifier_repetitions},
            {"scan",
             {{"beta_scale", c.scan.beta_scale},
              {"cap_factor", c.scan.cap_factor},
              {"strict_bands", c.scan.strict_bands}}},
            {"tree_source", src},
            {"seed", c.seed.value}};
}

BuildConfig config_of(const json& j) {
    BuildConfig c;
    c.eps = j.at("eps").get<double>();
    c.radius = j.at("radius").get<double>();
    c.jl_enabled = optional_of<bool>(j, "jl_enabled");
    c.jl_target_dim = optional_of<std::size_t>(j, "jl_target_dim");
    c.snap_queries = j.at("snap_queries").get<bool>();
    c.grid_side = optional_of<double>(j, "grid_side");
    c.classifier_repetitions = j.at("classifier_repetitions").get<std::size_t>();
    const auto& s = j.at("scan");
    c.scan.beta_scale = s.at("beta_scale").get<double>();
    c.scan.cap_factor = s.at("cap_factor").get<double>();
    c.scan.strict_bands = s.at("strict_bands").get<bool>();
    const auto& src = j.at("tree_source");
    const auto kind = src.at("kind").get<std::string>();
    if (kind == "worstcase") {
        WorstCaseSource wc;
        wc.query_grid_side = optional_of<double>(src, "query_grid_side");
        wc.dim_cap = src.at("dim_cap").get<std::size_t>();
        if (!src.at("light").is_null()) {
            const auto& l = src.at("light");
            LightEdgeParams lp;
            lp.rho = l.at("rho").get<double>();
            lp.net_constant = l.at("net_constant").get<double>();
            lp.embed_dim_constant = l.at("embed_dim_constant").get<double>();
            lp.grid_divisor = l.at("grid_divisor").get<double>();
            lp.fallback_pairs = l.at("fallback_pairs").get<std::size_t>();
            lp.max_candidates = l.at("max_candidates").get<std::size_t>();
            wc.light = lp;
        }
        c.tree_source = wc;
    } else if (kind == "learned") {
        LearnedSource ls;
        ls.kind = query_kind_of(src.at("query_kind").get<std::string>());
        ls.sample_size = src.at("sample_size").get<std::size_t>();
        ls.spread = src.at("spread").get<double>();
        c.tree_source = ls;
    } else {
        throw FormatError("unknown tree source '" + kind + "'");
    }
    c.seed.value = j.at("seed").get<std::uint64_t>();
    return c;
}

}  // namespace

ModelFile model_of(const CountingIndex& idx, std::string training_digest) {
    ModelFile m;
    m.config = idx.config();
    if (auto* ls = std::get_if<LearnedSource>(&m.config.tree_source)) ls->queries = {};
    m.order = idx.path();
    m.data_digest = idx.data_digest();
    m.training_digest = std::move(training_digest);
    m.n = idx.path().order.size();
    m.d = idx.ambient_dim();
    return m;
}

std::string model_to_json(const ModelFile& m) {
    const json j = {{"format", "arc-model"},
                    {"version", 1},
                    {"n", m.n},
                    {"d", m.d},
                    {"data_digest", m.data_digest},
                    {"training_digest", m.training_digest},
                    {"config", config_json(m.config)},
                    {"order", m.order.order}};
    return j.dump(2);
}

ModelFile model_from_json(const std::string& text) {
    try {
        const json j = json::parse(text);
        if (j.at("format").get<std::string>() != "arc-model") throw FormatError("not an arc-model file");
        if (j.at("version").get<int>() != 1) throw FormatError("unsupported model version");
        ModelFile m;
        m.n = j.at("n").get<std::size_t>();
        m.d = j.at("d").get<std::size_t>();
        m.data_digest = j.at("data_digest").get<std::string>();
        m.training_digest = j.value("training_digest", std::string{});
        m.config = config_of(j.at("config"));
        m.order.order = j.at("order").get<std::vector<std::uint32_t>>();
        if (m.order.order.size() != m.n || !m.order.is_permutation()) throw FormatError("order is not a permutation");
        return m;
    } catch (const json::parse_error& e) {
        throw FormatError("offset " + std::to_string(e.byte) + ": invalid JSON");
    } catch (const json::exception& e) {
        throw FormatError(std::string("model file: ") + e.what());
    }
}

void save_model(const std::string& path, const ModelFile& m) {
    std::ofstream out(path);
    if (!out) throw std::runtime_error("cannot write " + path);
    out << model_to_json(m) << '\n';
}

ModelFile load_model(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw FormatError("cannot open " + path);
    std::stringstream ss;
    ss << in.rdbuf();
    return model_from_json(ss.str());
}

CountingIndex rebuild_index(const ModelFile& m, const WeightedPointSet& pts) {
    if (pts.size() != m.n || pts.dim() != m.d || digest(pts) != m.data_digest) {
        throw FormatError("data file does not match the model digest");
    }
    return assemble_counting_index(pts, m.config, m.order);
}

}  // namespace arc
