#ifndef CYCLOKAPPA_REPORT_HPP
#define CYCLOKAPPA_REPORT_HPP

#include <optional>
#include <string>
#include <vector>

#include "cyclokappa/kappa.hpp"

#include "json.hpp"

namespace cyclokappa {

inline constexpr const char* kVersion = "0.1.0";

enum class OutputFormat { kCsv, kJson, kTable };

std::string render_kappa(const std::vector<KappaResult>& rows, OutputFormat fmt);

nlohmann::json kappa_to_json(const KappaResult& r);
KappaResult kappa_from_json(const nlohmann::json& j);

// Line-delimited JSON cache keyed by (command, parameters, software version).
class Cache {
 public:
  Cache() = default;
  explicit Cache(std::string path) : path_(std::move(path)) {}

  bool enabled() const { return !path_.empty(); }
  const std::string& path() const { return path_; }

  std::optional<nlohmann::json> lookup(const std::string& command,
                                       const nlohmann::json& parameters) const;
  void append(const std::string& command, const nlohmann::json& parameters,
              const nlohmann::json& result) const;
  std::vector<nlohmann::json> records() const;
  void clear() const;

 private:
  std::string path_;
};

// Cache path resolution: explicit flag, else CYCLOKAPPA_CACHE, else disabled.
Cache resolve_cache(const std::string& flag_path);

KappaResult kappa_cached(uint32_t N, bool force_rational, const Cache& cache);

}  // namespace cyclokappa

#endif
