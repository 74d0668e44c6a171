#include "mersenne/storage.hpp"

#include <algorithm>
#include <charconv>
#include <fstream>
#include <istream>
#include <set>
#include <sstream>

#include <json.hpp>

namespace mersenne_omega {

namespace {

using ordered_json = nlohmann::ordered_json;

// Entries beyond this index would make M_n itself unreasonably large.
constexpr MersenneIndex kMaxCacheIndex = 1'000'000;

bool is_decimal(std::string_view s) {
  return !s.empty() && std::all_of(s.begin(), s.end(), [](char c) { return c >= '0' && c <= '9'; });
}

std::optional<std::uint64_t> parse_u64(std::string_view s) {
  if (!is_decimal(s)) return std::nullopt;
  std::uint64_t value = 0;
  auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), value);
  if (ec != std::errc() || ptr != s.data() + s.size()) return std::nullopt;
  return value;
}

// Builds one entry, throwing std::runtime_error with the reason on any defect.
Factorization entry_from_json(const ordered_json& entry, MersenneIndex n) {
  if (n == 0 || n > kMaxCacheIndex) throw std::runtime_error("index out of range");
  Factorization f;
  f.target = mersenne(n);
  if (!entry.contains("factors") || !entry["factors"].is_array()) throw std::runtime_error("missing factors array");
  for (const auto& item : entry["factors"]) {
    if (!item.is_array() || item.size() != 2 || !item[0].is_string() || !item[1].is_number_unsigned())
      throw std::runtime_error("factor must be [\"<decimal>\", <exponent>]");
    const auto text = item[0].get<std::string>();
    if (!is_decimal(text)) throw std::runtime_error("factor is not a decimal string: " + text);
    f.factors.push_back({Natural(text, 10), item[1].get<std::uint64_t>()});
  }
  f.cofactor = 1;
  if (entry.contains("cofactor")) {
    if (!entry["cofactor"].is_string() || !is_decimal(entry["cofactor"].get<std::string>()))
      throw std::runtime_error("cofactor must be a decimal string");
    f.cofactor = Natural(entry["cofactor"].get<std::string>(), 10);
  }
  if (!entry.contains("status") || !entry["status"].is_string()) throw std::runtime_error("missing status");
  const auto status = entry["status"].get<std::string>();
  if (status == "complete") f.status = FactorStatus::complete;
  else if (status == "partial") f.status = FactorStatus::partial;
  else throw std::runtime_error("unknown status \"" + status + "\"");
  if (auto problem = invariant_violation(f); !problem.empty()) throw std::runtime_error(problem);
  return f;
}

ordered_json factors_json(const Factorization& f) {
  ordered_json factors = ordered_json::array();
  for (const auto& pp : f.factors) factors.push_back(ordered_json::array({to_decimal(pp.prime), pp.exponent}));
  return factors;
}

void write_file(const std::filesystem::path& path, const std::string& body) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw StorageError("cannot open " + path.string() + " for writing");
  out << body;
  out.flush();
  if (!out) throw StorageError("write to " + path.string() + " failed");
}

std::string optional_cell(const std::optional<std::uint64_t>& v) { return v ? std::to_string(*v) : ""; }
std::string optional_cell(const std::optional<bool>& v) { return v ? (*v ? "true" : "false") : ""; }
std::string optional_cell(const std::optional<double>& v) { return v ? format_real(*v) : ""; }

ordered_json optional_string(const std::optional<std::string>& s) {
  return s ? ordered_json(*s) : ordered_json(nullptr);
}

}  // namespace

FactorCache parse_cache(const std::string& text, std::vector<CacheDiagnostic>* rejected) {
  ordered_json doc;
  try {
    doc = ordered_json::parse(text);
  } catch (const nlohmann::json::parse_error& e) {
    throw StorageError(std::string("cache parse failure: ") + e.what());
  }
  if (!doc.is_object() || !doc.contains("version") || !doc["version"].is_number_integer())
    throw StorageError("cache: missing integer \"version\" field");
  if (doc["version"].get<int>() != FactorCache::kVersion)
    throw StorageError("cache: unsupported version " + doc["version"].dump());
  if (!doc.contains("entries") || !doc["entries"].is_array()) throw StorageError("cache: missing \"entries\" array");

  FactorCache cache;
  std::set<MersenneIndex> seen;
  std::vector<CacheDiagnostic> problems;
  for (const auto& entry : doc["entries"]) {
    if (!entry.is_object() || !entry.contains("n") || !entry["n"].is_number_unsigned()) {
      problems.push_back({0, "entry without a non-negative integer \"n\""});
      continue;
    }
    const auto n = entry["n"].get<MersenneIndex>();
    if (!seen.insert(n).second) {
      problems.push_back({n, "duplicate entry"});
      continue;
    }
    try {
      cache.insert_verified(n, entry_from_json(entry, n));
    } catch (const std::exception& e) {
      problems.push_back({n, e.what()});
    }
  }
  if (!problems.empty()) {
    if (rejected) {
      rejected->insert(rejected->end(), problems.begin(), problems.end());
    } else {
      std::string message = "cache: rejected entries:";
      for (const auto& p : problems) message += " n=" + std::to_string(p.n) + " (" + p.reason + ")";
      throw StorageError(message);
    }
  }
  return cache;
}

FactorCache load_cache(const std::filesystem::path& path, std::vector<CacheDiagnostic>* rejected) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw StorageError("cannot open cache " + path.string());
  std::ostringstream buffer;
  buffer << in.rdbuf();
  if (in.bad()) throw StorageError("cannot read cache " + path.string());
  return parse_cache(buffer.str(), rejected);
}

std::string serialize_cache(const FactorCache& cache) {
  ordered_json doc;
  doc["version"] = FactorCache::kVersion;
  doc["entries"] = ordered_json::array();
  for (const auto& [n, f] : cache.snapshot()) {
    ordered_json entry;
    entry["n"] = n;
    entry["factors"] = factors_json(f);
    if (!f.complete()) entry["cofactor"] = to_decimal(f.cofactor);
    entry["status"] = std::string(to_string(f.status));
    doc["entries"].push_back(std::move(entry));
  }
  return doc.dump(2) + "\n";
}

void save_cache(const FactorCache& cache, const std::filesystem::path& path) {
  const std::string body = serialize_cache(cache);
  std::filesystem::path tmp = path;
  tmp += ".tmp";
  write_file(tmp, body);
  std::error_code ec;
  std::filesystem::rename(tmp, path, ec);
  if (ec) throw StorageError("cannot replace " + path.string() + ": " + ec.message());
}

ImportSummary import_known_factors(std::istream& in, FactorCache& cache) {
  ImportSummary summary;
  std::string line;
  std::uint64_t line_no = 0;
  auto reject = [&](const std::string& reason) {
    ++summary.rejected;
    summary.rejections.push_back("line " + std::to_string(line_no) + ": " + reason);
  };
  while (std::getline(in, line)) {
    ++line_no;
    std::istringstream fields(line);
    std::string index_text;
    std::string factor_text;
    std::string extra;
    if (!(fields >> index_text) || index_text.front() == '#') continue;
    if (!(fields >> factor_text) || (fields >> extra)) {
      reject("expected \"n factor\"");
      continue;
    }
    const auto n = parse_u64(index_text);
    if (!n || *n == 0 || *n > kMaxCacheIndex) {
      reject("bad index \"" + index_text + "\"");
      continue;
    }
    if (!is_decimal(factor_text)) {
      reject("bad factor \"" + factor_text + "\"");
      continue;
    }
    const Natural q(factor_text, 10);
    if (q < 2 || !mpz_divisible_p(mersenne(*n).get_mpz_t(), q.get_mpz_t())) {
      reject(factor_text + " does not divide M_" + index_text);
      continue;
    }
    if (!is_prime_like(is_probable_prime(q))) {
      reject(factor_text + " is composite");
      continue;
    }
    const auto before = cache.find(*n);
    const auto after = cache.merge_primes(*n, std::span<const Natural>(&q, 1));
    ++summary.accepted;
    if (!before || before->primes() != after.primes()) ++summary.new_primes;
  }
  if (in.bad()) throw StorageError("read failure while importing factors");
  return summary;
}

ImportSummary import_known_factors(const std::filesystem::path& path, FactorCache& cache) {
  std::ifstream in(path);
  if (!in) throw StorageError("cannot open factor table " + path.string());
  return import_known_factors(in, cache);
}

std::string format_real(double value) {
  char buffer[64];
  auto [ptr, ec] = std::to_chars(buffer, buffer + sizeof(buffer), value, std::chars_format::fixed, 9);
  if (ec != std::errc()) return "nan";
  return std::string(buffer, ptr);
}

Report census_report(const std::vector<CensusRecord>& records) {
  std::string body = std::string(kCensusCsvHeader) + "\n";
  for (const auto& r : records) {
    body += std::to_string(r.n) + "," + std::to_string(r.d_n) + "," + std::to_string(r.omega_n) + "," +
            std::to_string(r.bigomega_n) + "," + optional_cell(r.omega_M) + "," + std::to_string(r.bound_prop2) +
            "," + std::to_string(r.bound_divisors) + "," + optional_cell(r.hw_value) + "," +
            optional_cell(r.lemma6_holds) + "," + optional_cell(r.final_inequality_holds) + "," +
            (r.complete ? "true" : "false") + "\n";
  }
  return {ReportKind::census_csv, body};
}

Report classification_report(const ClassificationReport& r) {
  ordered_json doc;
  doc["n"] = r.n;
  doc["shape"] = std::string(to_string(r.form.shape));
  doc["index_primes"] = r.form.index_primes;
  doc["min_omega"] = r.form.min_omega;
  ordered_json eligible = ordered_json::array();
  for (auto c : r.form.eligible_omega) eligible.push_back(std::string(to_string(c)));
  doc["eligible_omega"] = eligible;
  doc["omega"] = r.omega;
  doc["matched_clause"] = std::string(to_string(r.matched_clause));
  doc["decomposition"] = r.decomposition;
  doc["consistent"] = r.consistent;
  doc["problems"] = r.problems;
  ordered_json checks = ordered_json::array();
  for (const auto& c : r.divisor_form_checks) {
    ordered_json item;
    item["q"] = to_decimal(c.q);
    item["p"] = c.p;
    item["l"] = to_decimal(c.l);
    item["l_class"] = c.l_class;
    item["form_integral"] = c.form_integral;
    item["passes"] = c.passes;
    checks.push_back(std::move(item));
  }
  doc["divisor_form_checks"] = checks;
  doc["factors"] = factors_json(r.factorization);
  return {ReportKind::classification_json, doc.dump(2) + "\n"};
}

Report suite_report(const SuiteReport& report) {
  ordered_json doc;
  doc["max_n"] = report.max_n;
  doc["passed"] = report.failures() == 0 && report.inconclusive() == 0;
  doc["failures"] = report.failures();
  doc["inconclusive"] = report.inconclusive();
  ordered_json suites = ordered_json::array();
  for (const auto& s : report.suites) {
    ordered_json item;
    item["name"] = s.name;
    item["passed"] = s.passed;
    item["failed"] = s.failed;
    item["inconclusive"] = s.inconclusive;
    item["skipped"] = s.skipped;
    item["first_counterexample"] = optional_string(s.first_counterexample);
    item["first_inconclusive"] = optional_string(s.first_inconclusive);
    suites.push_back(std::move(item));
  }
  doc["suites"] = suites;
  return {ReportKind::suite_json, doc.dump(2) + "\n"};
}

void export_report(const Report& report, const std::filesystem::path& path) { write_file(path, report.body); }

}  // namespace mersenne_omega
