#include "output.hpp"

#include <json.hpp>  // vendored nlohmann/json single header

#include <charconv>
#include <chrono>
#include <ctime>
#include <functional>
#include <stdexcept>
#include <thread>

namespace laxkit::tools {

std::string fmt(double v) {
    char buf[40];
    auto res = std::to_chars(buf, buf + sizeof(buf), v);
    return std::string(buf, res.ptr);
}

std::vector<std::string> cplx_cells(laxkit::cplx v) {
    return {fmt(v.real()), fmt(v.imag())};
}

void ResultTable::add_row(std::vector<std::string> cells) {
    if (cells.size() != columns_.size())
        throw std::invalid_argument("ResultTable: row width mismatch");
    rows_.push_back(std::move(cells));
}

std::string ResultTable::to_csv() const {
    std::string out;
    for (size_t c = 0; c < columns_.size(); ++c) {
        out += columns_[c];
        out += (c + 1 < columns_.size()) ? ',' : '\n';
    }
    for (const auto& row : rows_)
        for (size_t c = 0; c < row.size(); ++c) {
            out += row[c];
            out += (c + 1 < row.size()) ? ',' : '\n';
        }
    return out;
}

std::string ResultTable::to_json() const {
    nlohmann::ordered_json arr = nlohmann::ordered_json::array();
    for (const auto& row : rows_) {
        nlohmann::ordered_json obj = nlohmann::ordered_json::object();
        for (size_t c = 0; c < row.size(); ++c) obj[columns_[c]] = row[c];
        arr.push_back(obj);
    }
    return arr.dump(2) + "\n";
}

std::string ResultTable::render(const std::string& format) const {
    if (format == "csv") return to_csv();
    if (format == "json") return to_json();
    throw std::invalid_argument("unknown output format: " + format);
}

void parallel_for(int n, int jobs, const std::function<void(int)>& fn) {
    if (jobs <= 1 || n <= 1) {
        for (int i = 0; i < n; ++i) fn(i);
        return;
    }
    const int workers = std::min(jobs, n);
    std::vector<std::thread> pool;
    for (int w = 0; w < workers; ++w)
        pool.emplace_back([&, w]() {
            for (int i = w; i < n; i += workers) fn(i);
        });
    for (auto& t : pool) t.join();
}

std::string Manifest::to_json() const {
    nlohmann::ordered_json j;
    j["config_sha256"] = config_sha256;
    j["seed"] = seed;
    j["version"] = version;
    j["started_at"] = started_at;
    j["elapsed_s"] = elapsed_s;
    j["results"] = results;
    return j.dump(2) + "\n";
}

std::string iso8601_now() {
    const auto now = std::chrono::system_clock::now();
    const std::time_t t = std::chrono::system_clock::to_time_t(now);
    char buf[32];
    std::tm tm{};
    gmtime_r(&t, &tm);
    std::strftime(buf, sizeof(buf), "%Y-%m-%dT%H:%M:%SZ", &tm);
    return buf;
}

}  // namespace laxkit::tools
