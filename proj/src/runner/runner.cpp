#include <chrono>
#include <cstdio>
#include <ctime>
#include <filesystem>
#include <fstream>
#include <iomanip>
#include <sstream>

#include "json.hpp"
#include "klab/runner.hpp"

namespace klab::runner {

namespace {

std::string trim(const std::string& s) {
  const auto b = s.find_first_not_of(" \t\r");
  if (b == std::string::npos) return {};
  const auto e = s.find_last_not_of(" \t\r");
  return s.substr(b, e - b + 1);
}

std::uint64_t fnv1a(const std::string& s) {
  std::uint64_t h = 0xcbf29ce484222325ULL;
  for (const unsigned char c : s) {
    h ^= c;
    h *= 0x100000001b3ULL;
  }
  return h;
}

std::string utc_timestamp() {
  const auto now = std::chrono::system_clock::now();
  const std::time_t t = std::chrono::system_clock::to_time_t(now);
  std::tm tm{};
  gmtime_r(&t, &tm);
  std::ostringstream os;
  os << std::put_time(&tm, "%Y-%m-%dT%H:%M:%SZ");
  return os.str();
}

// Quotes a CSV field when it carries a separator or a quote.
std::string csv_field(const std::string& s) {
  if (s.find_first_of(",\"\n") == std::string::npos) return s;
  std::string out = "\"";
  for (const char c : s) {
    if (c == '"') out += '"';
    out += c;
  }
  return out + "\"";
}

}  // namespace

// Declared in suites.cpp.
std::vector<Record> dispatch(const Config& config);

const SubcommandSpec& find_subcommand(const std::string& name) {
  for (const auto& s : subcommands()) {
    if (s.name == name) return s;
  }
  throw ConfigError("unknown subcommand '" + name + "'");
}

Config::Config(const SubcommandSpec& spec) : subcommand_(spec.name) {
  for (const auto& o : spec.options) values_[o.key] = o.default_value;
}

void Config::set(const std::string& key, const std::string& value) {
  auto it = values_.find(key);
  if (it == values_.end()) throw ConfigError("unknown key '" + key + "' for subcommand " + subcommand_);
  it->second = value;
}

void Config::merge_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot read config file " + path);
  std::string line;
  int lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    if (const auto hash = line.find('#'); hash != std::string::npos) line.erase(hash);
    line = trim(line);
    if (line.empty()) continue;
    const auto eq = line.find('=');
    if (eq == std::string::npos) {
      throw ConfigError(path + ":" + std::to_string(lineno) + ": expected key = value");
    }
    set(trim(line.substr(0, eq)), trim(line.substr(eq + 1)));
  }
}

const std::string& Config::get(const std::string& key) const {
  auto it = values_.find(key);
  if (it == values_.end()) throw ConfigError("missing key '" + key + "'");
  return it->second;
}

std::int64_t Config::get_int(const std::string& key) const {
  const auto& v = get(key);
  try {
    std::size_t pos = 0;
    const auto x = std::stoll(v, &pos);
    if (pos == v.size()) return x;
  } catch (const std::exception&) {
  }
  throw ConfigError("key '" + key + "' expects an integer, got '" + v + "'");
}

std::uint64_t Config::get_seed() const {
  const auto& v = get("seed");
  try {
    std::size_t pos = 0;
    const auto x = std::stoull(v, &pos);
    if (pos == v.size() && v.find('-') == std::string::npos) return x;
  } catch (const std::exception&) {
  }
  throw ConfigError("seed expects an unsigned 64-bit integer, got '" + v + "'");
}

double Config::get_double(const std::string& key) const {
  const auto& v = get(key);
  try {
    std::size_t pos = 0;
    const auto x = std::stod(v, &pos);
    if (pos == v.size()) return x;
  } catch (const std::exception&) {
  }
  throw ConfigError("key '" + key + "' expects a real number, got '" + v + "'");
}

bool Config::get_bool(const std::string& key) const {
  const auto& v = get(key);
  if (v == "true" || v == "1" || v == "yes") return true;
  if (v == "false" || v == "0" || v == "no") return false;
  throw ConfigError("key '" + key + "' expects true/false, got '" + v + "'");
}

std::vector<std::int64_t> Config::get_int_list(const std::string& key) const {
  const auto& v = get(key);
  std::vector<std::int64_t> out;
  std::stringstream ss(v);
  std::string item;
  while (std::getline(ss, item, ',')) {
    item = trim(item);
    try {
      std::size_t pos = 0;
      out.push_back(std::stoll(item, &pos));
      if (pos != item.size()) throw std::invalid_argument(item);
    } catch (const std::exception&) {
      throw ConfigError("key '" + key + "' expects a comma-separated integer list, got '" + v + "'");
    }
  }
  if (out.empty()) throw ConfigError("key '" + key + "' must not be empty");
  return out;
}

std::string Config::echo() const {
  std::string out;
  for (const auto& [k, v] : values_) {
    if (!out.empty()) out += ';';
    out += k + "=" + v;
  }
  return out;
}

bool Record::passed() const {
  for (const auto& [name, ok] : assertions) {
    if (!ok) return false;
  }
  return true;
}

bool RunOutcome::passed() const {
  for (const auto& r : records) {
    if (!r.passed()) return false;
  }
  return true;
}

RunOutcome run(const Config& config) {
  const auto seed = config.get_seed();
  if (config.get_int("workers") < 1) throw ConfigError("workers must be >= 1");
  const auto start = std::chrono::steady_clock::now();
  RunOutcome out;
  try {
    out.records = dispatch(config);
  } catch (const ConfigError&) {
    throw;
  } catch (const std::invalid_argument& e) {
    throw ConfigError(std::string("invalid configuration: ") + e.what());
  } catch (const std::length_error& e) {
    throw ConfigError(std::string("configuration exceeds a size limit: ") + e.what());
  } catch (const std::domain_error& e) {
    throw ConfigError(std::string("invalid configuration: ") + e.what());
  }
  out.runtime_seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  const auto stamp = utc_timestamp();
  const auto echo = config.echo();
  for (auto& r : out.records) {
    r.subcommand = config.subcommand();
    r.seed = seed;
    r.timestamp = stamp;
    r.runtime_seconds = out.runtime_seconds;
    r.params = echo + ";record=" + r.label;
    for (const auto& [k, v] : r.detail) r.params += ";" + k + "=" + v;
    char buf[17];
    std::snprintf(buf, sizeof buf, "%016llx",
                  static_cast<unsigned long long>(fnv1a(r.subcommand + "|" + std::to_string(seed) + "|" + r.params)));
    r.id = buf;
  }
  return out;
}

std::string format_real(double x) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", x);
  return buf;
}

std::string csv_row(const Record& r) {
  std::string measured, assertions;
  for (const auto& [k, v] : r.measured) {
    if (!measured.empty()) measured += ';';
    measured += k + "=" + format_real(v);
  }
  for (const auto& [k, ok] : r.assertions) {
    if (!assertions.empty()) assertions += ';';
    assertions += k + "=" + (ok ? "pass" : "fail");
  }
  return csv_field(r.id) + "," + csv_field(r.timestamp) + "," + csv_field(r.subcommand) + "," + std::to_string(r.seed) +
         "," + csv_field(r.params) + "," + csv_field(measured) + "," + csv_field(assertions);
}

std::string json_line(const Record& r) {
  nlohmann::ordered_json j;
  j["experiment_id"] = r.id;
  j["timestamp"] = r.timestamp;
  j["subcommand"] = r.subcommand;
  j["seed"] = r.seed;
  j["params"] = r.params;
  auto& m = j["measured"] = nlohmann::ordered_json::object();
  for (const auto& [k, v] : r.measured) m[k] = v;
  auto& a = j["assertions"] = nlohmann::ordered_json::object();
  for (const auto& [k, ok] : r.assertions) a[k] = ok ? "pass" : "fail";
  j["runtime_seconds"] = r.runtime_seconds;
  return j.dump();
}

void append_csv(const std::string& path, const std::vector<Record>& records) {
  const bool fresh = !std::filesystem::exists(path) || std::filesystem::file_size(path) == 0;
  std::ofstream out(path, std::ios::app);
  if (!out) throw ConfigError("cannot open " + path + " for writing");
  if (fresh) out << kCsvHeader << '\n';
  for (const auto& r : records) out << csv_row(r) << '\n';
}

void append_json(const std::string& path, const std::vector<Record>& records) {
  std::ofstream out(path, std::ios::app);
  if (!out) throw ConfigError("cannot open " + path + " for writing");
  for (const auto& r : records) out << json_line(r) << '\n';
}

void print_table(std::ostream& os, const std::vector<Record>& records) {
  for (const auto& r : records) {
    os << r.subcommand << " [" << r.label << "]";
    for (const auto& [k, v] : r.detail) os << ' ' << k << '=' << v;
    os << '\n';
    for (const auto& [k, v] : r.measured) os << "    " << std::left << std::setw(28) << k << format_real(v) << '\n';
    for (const auto& [k, ok] : r.assertions) os << "    " << std::left << std::setw(28) << k << (ok ? "PASS" : "FAIL") << '\n';
  }
}

}  // namespace klab::runner
