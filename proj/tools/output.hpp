#pragma once

#include "laxkit/tensor.hpp"

#include <cstdint>
#include <functional>
#include <string>
#include <vector>

namespace laxkit::tools {

/// Table of result rows with a fixed header; serialized as CSV (header row,
/// shortest round-trip decimals) or as a JSON array of row objects.  Both
/// forms are byte-deterministic for identical inputs.
class ResultTable {
public:
    explicit ResultTable(std::vector<std::string> columns) : columns_(std::move(columns)) {}

    void add_row(std::vector<std::string> cells);
    int rows() const { return int(rows_.size()); }

    std::string to_csv() const;
    std::string to_json() const;
    std::string render(const std::string& format) const;  // "csv" | "json"

private:
    std::vector<std::string> columns_;
    std::vector<std::vector<std::string>> rows_;
};

/// Shortest round-trip decimal representation.
std::string fmt(double v);
std::string fmt(laxkit::cplx v);  // "re+imi" pair is not used; returns re,im via two cells
std::vector<std::string> cplx_cells(laxkit::cplx v);

/// Deterministic parallel map: applies fn(i) for i in [0, n) with `jobs`
/// workers and static chunking; results land in index order.
void parallel_for(int n, int jobs, const std::function<void(int)>& fn);

struct Manifest {
    std::string config_sha256;
    std::uint64_t seed = 0;
    std::string version;
    std::string started_at;
    double elapsed_s = 0.0;
    std::string results;  // short summary, e.g. "max_residual=1.2e-13 pass=1"

    std::string to_json() const;
};

std::string iso8601_now();

}  // namespace laxkit::tools
