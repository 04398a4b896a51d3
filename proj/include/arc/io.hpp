#pragma once

#include <cstddef>
#include <iosfwd>
#include <stdexcept>
#include <string>

#include "arc/core.hpp"
#include "arc/counter.hpp"
#include "arc/learned.hpp"
#include "arc/ptree.hpp"

namespace arc {

/// Malformed input file; the message names the first bad line or byte offset.
class FormatError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

enum class PointsFormat { Text, Binary };

/// Text: "arc-points v1 <n> <d>" then n rows of d coordinates and a weight.
/// Binary: "ARC1", u32 n, u32 d, then n (d + 1) little-endian doubles.
WeightedPointSet read_points(std::istream& in);
WeightedPointSet read_points_file(const std::string& path);
void write_points(std::ostream& out, const WeightedPointSet& pts, PointsFormat format);
void write_points_file(const std::string& path, const WeightedPointSet& pts, PointsFormat format);

/// Queries are stored as points files; weights are ignored on read.
QuerySample read_queries_file(const std::string& path);
void write_queries_file(const std::string& path, const QuerySample& qs, PointsFormat format);

/// Everything needed to rebuild an index from its data file.
struct ModelFile {
    BuildConfig config;
    SpanningPath order;
    std::string data_digest;
    std::string training_digest;
    std::size_t n = 0;
    std::size_t d = 0;
};

ModelFile model_of(const CountingIndex& idx, std::string training_digest = {});
std::string model_to_json(const ModelFile& m);
ModelFile model_from_json(const std::string& text);
void save_model(const std::string& path, const ModelFile& m);
ModelFile load_model(const std::string& path);

/// Throws FormatError if `pts` is not the data the model was built on.
CountingIndex rebuild_index(const ModelFile& m, const WeightedPointSet& pts);

}  // namespace arc
