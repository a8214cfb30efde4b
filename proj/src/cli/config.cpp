#include <algorithm>
#include <charconv>
#include <fstream>
#include <istream>
#include <sstream>

#include "pns/arith.hpp"
#include "pns/cli.hpp"

namespace pns::cli {

namespace {

std::string trim(const std::string& s) {
  const auto b = s.find_first_not_of(" \t\r");
  if (b == std::string::npos) return {};
  const auto e = s.find_last_not_of(" \t\r");
  return s.substr(b, e - b + 1);
}

template <class T>
bool parse_number(const std::string& text, T& out) {
  const std::string t = trim(text);
  if (t.empty()) return false;
  const auto [ptr, ec] = std::from_chars(t.data(), t.data() + t.size(), out);
  return ec == std::errc() && ptr == t.data() + t.size();
}

template <class T>
T field_number(const std::string& source, int line, const std::string& field, const std::string& text) {
  T v{};
  if (!parse_number(text, v)) throw ConfigError(source, line, field, "not a valid number: '" + trim(text) + "'");
  return v;
}

std::string describe(const std::string& source, int line, const std::string& field, const std::string& message) {
  std::string where = source;
  if (line > 0) where += ":" + std::to_string(line);
  return where + ": field '" + field + "': " + message;
}

}  // namespace

ConfigError::ConfigError(std::string source, int line, std::string field, const std::string& message)
    : std::runtime_error(describe(source, line, field, message)), field_(std::move(field)), line_(line) {}

std::vector<unsigned> KRange::values() const {
  std::vector<unsigned> out;
  for (unsigned k = start; k <= end; k += step) out.push_back(k);
  return out;
}

KRange parse_k_range(const std::string& text) {
  std::vector<std::string> parts;
  std::stringstream ss(text);
  for (std::string part; std::getline(ss, part, ':');) parts.push_back(part);
  if (parts.empty() || parts.size() > 3) throw std::invalid_argument("expected k, start:end or start:end:step");
  unsigned v[3] = {0, 0, 2};
  for (std::size_t i = 0; i < parts.size(); ++i) {
    if (!parse_number(parts[i], v[i])) throw std::invalid_argument("not a valid integer: '" + trim(parts[i]) + "'");
  }
  if (parts.size() == 1) v[1] = v[0];
  return KRange{v[0], v[1], v[2]};
}

std::vector<std::uint64_t> parse_n_list(const std::string& text) {
  std::vector<std::uint64_t> out;
  std::stringstream ss(text);
  for (std::string part; std::getline(ss, part, ',');) {
    std::uint64_t n = 0;
    if (!parse_number(part, n)) throw std::invalid_argument("not a valid integer: '" + trim(part) + "'");
    out.push_back(n);
  }
  if (out.empty()) throw std::invalid_argument("empty list");
  return out;
}

void SweepConfig::validate(const std::string& source) const {
  auto fail = [&](const std::string& field, const std::string& msg) { throw ConfigError(source, 0, field, msg); };
  if (theorem_id != 1 && theorem_id != 2 && theorem_id != 5) fail("theorem", "must be 1, 2 or 5");
  if (k_range.start % 2 != 0 || k_range.end % 2 != 0) fail("k", "weights must be even");
  if (k_range.step == 0 || k_range.step % 2 != 0) fail("k", "step must be even and positive");
  if (k_range.start < 4) fail("k", "weights must be at least 4");
  if (k_range.start > k_range.end) fail("k", "start exceeds end");
  if (N_list.empty()) fail("N", "no levels given");
  for (const auto N : N_list) {
    if (N < 1 || N > arith::kFactorizeCap) fail("N", "level out of range: " + std::to_string(N));
    if (theorem_id == 1 && N != 1) fail("N", "theorem 1 needs N = 1");
    if (theorem_id != 1 && !arith::is_squarefree(N)) fail("N", "level must be square-free: " + std::to_string(N));
  }
  if (epsilon && !(*epsilon > 0.0)) fail("epsilon", "must be positive");
  if (epsilon && std::find(N_list.begin(), N_list.end(), 1) != N_list.end()) {
    fail("epsilon", "the vanishing window needs N > 1");
  }
  if (precision < kMinPrecision) fail("precision", "must be at least 53 bits");
  if (max_precision < precision) fail("max_precision", "must be at least the starting precision");
  if (!(target_radius > 0.0)) fail("target_radius", "must be positive");
  if (output_format != "csv" && output_format != "json") fail("format", "must be csv or json");
}

void apply_config(SweepConfig& config, std::istream& in, const std::string& source) {
  int line_no = 0;
  for (std::string line; std::getline(in, line);) {
    ++line_no;
    if (const auto hash = line.find('#'); hash != std::string::npos) line.erase(hash);
    if (trim(line).empty()) continue;
    const auto eq = line.find('=');
    if (eq == std::string::npos) throw ConfigError(source, line_no, trim(line), "expected key = value");
    const std::string key = trim(line.substr(0, eq));
    const std::string value = trim(line.substr(eq + 1));
    try {
      if (key == "theorem") {
        config.theorem_id = field_number<int>(source, line_no, key, value);
      } else if (key == "k") {
        config.k_range = parse_k_range(value);
      } else if (key == "N") {
        config.N_list = parse_n_list(value);
      } else if (key == "epsilon") {
        config.epsilon = field_number<double>(source, line_no, key, value);
      } else if (key == "precision") {
        config.precision = field_number<long>(source, line_no, key, value);
      } else if (key == "target_radius") {
        config.target_radius = field_number<double>(source, line_no, key, value);
      } else if (key == "max_precision") {
        config.max_precision = field_number<long>(source, line_no, key, value);
      } else if (key == "output") {
        config.output_path = value;
      } else if (key == "format") {
        config.output_format = value;
      } else if (key == "jobs") {
        config.jobs = field_number<unsigned>(source, line_no, key, value);
      } else {
        throw ConfigError(source, line_no, key, "unknown key");
      }
    } catch (const std::invalid_argument& e) {
      throw ConfigError(source, line_no, key, e.what());
    }
  }
}

void load_config(SweepConfig& config, const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError(path, 0, "config", "cannot open file");
  apply_config(config, in, path);
}

}  // namespace pns::cli
