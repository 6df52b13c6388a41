#include "cyclokappa/report.hpp"

#include <chrono>
#include <cstdlib>
#include <fstream>
#include <iomanip>
#include <sstream>

namespace cyclokappa {

std::string render_kappa(const std::vector<KappaResult>& rows, OutputFormat fmt) {
  std::ostringstream out;
  switch (fmt) {
    case OutputFormat::kCsv:
      out << "N,kappa,dimY1,rank,method,elapsed_ms\n";
      for (const auto& r : rows)
        out << r.N << ',' << r.kappa << ',' << r.dimY1 << ',' << r.rank << ','
            << r.method << ',' << r.elapsed_ms << '\n';
      break;
    case OutputFormat::kJson: {
      nlohmann::json arr = nlohmann::json::array();
      for (const auto& r : rows) arr.push_back(kappa_to_json(r));
      out << arr.dump(2) << '\n';
      break;
    }
    case OutputFormat::kTable:
      out << std::left << std::setw(6) << "N" << std::setw(8) << "kappa"
          << std::setw(8) << "dimY1" << std::setw(8) << "rank" << std::setw(18)
          << "method" << "elapsed_ms" << '\n';
      for (const auto& r : rows)
        out << std::left << std::setw(6) << r.N << std::setw(8) << r.kappa
            << std::setw(8) << r.dimY1 << std::setw(8) << r.rank << std::setw(18)
            << r.method << r.elapsed_ms << '\n';
      break;
  }
  return out.str();
}

nlohmann::json kappa_to_json(const KappaResult& r) {
  return nlohmann::json{{"N", r.N},       {"kappa", r.kappa},
                        {"dimY1", r.dimY1}, {"rank", r.rank},
                        {"method", r.method}, {"elapsed_ms", r.elapsed_ms}};
}

KappaResult kappa_from_json(const nlohmann::json& j) {
  KappaResult r;
  r.N = j.at("N").get<uint32_t>();
  r.kappa = j.at("kappa").get<uint32_t>();
  r.dimY1 = j.at("dimY1").get<uint32_t>();
  r.rank = j.at("rank").get<uint32_t>();
  r.method = j.at("method").get<std::string>();
  r.elapsed_ms = j.at("elapsed_ms").get<int64_t>();
  r.domain_dim = (uint64_t)r.N * r.N;
  r.codomain_dim = (uint64_t)r.dimY1 * r.dimY1;
  return r;
}

std::vector<nlohmann::json> Cache::records() const {
  std::vector<nlohmann::json> out;
  if (!enabled()) return out;
  std::ifstream in(path_);
  std::string line;
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    auto j = nlohmann::json::parse(line, nullptr, false);
    if (!j.is_discarded()) out.push_back(std::move(j));
  }
  return out;
}

std::optional<nlohmann::json> Cache::lookup(const std::string& command,
                                            const nlohmann::json& parameters) const {
  if (!enabled()) return std::nullopt;
  std::optional<nlohmann::json> hit;
  for (const auto& rec : records()) {
    if (rec.value("command", "") != command) continue;
    if (rec.value("software_version", "") != kVersion) continue;
    if (!rec.contains("parameters") || rec["parameters"] != parameters) continue;
    if (rec.contains("result")) hit = rec["result"];  // last record wins
  }
  return hit;
}

void Cache::append(const std::string& command, const nlohmann::json& parameters,
                   const nlohmann::json& result) const {
  if (!enabled()) return;
  const auto now = std::chrono::system_clock::now();
  const auto secs = std::chrono::duration_cast<std::chrono::seconds>(
                        now.time_since_epoch())
                        .count();
  nlohmann::json rec{{"schema_version", 1},
                     {"command", command},
                     {"parameters", parameters},
                     {"result", result},
                     {"software_version", kVersion},
                     {"timestamp", secs}};
  std::ofstream out(path_, std::ios::app);
  out << rec.dump() << '\n';
}

void Cache::clear() const {
  if (!enabled()) return;
  std::ofstream out(path_, std::ios::trunc);
}

Cache resolve_cache(const std::string& flag_path) {
  if (!flag_path.empty()) return Cache(flag_path);
  if (const char* env = std::getenv("CYCLOKAPPA_CACHE"); env && *env)
    return Cache(env);
  return Cache();
}

KappaResult kappa_cached(uint32_t N, bool force_rational, const Cache& cache) {
  nlohmann::json params{{"N", N}, {"force_rational", force_rational}};
  if (auto hit = cache.lookup("kappa", params)) return kappa_from_json(*hit);
  KappaResult r = kappa(N, force_rational);
  cache.append("kappa", params, kappa_to_json(r));
  return r;
}

}  // namespace cyclokappa
