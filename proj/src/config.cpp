#include "simbench/config.hpp"

#include <algorithm>
#include <charconv>
#include <cstdio>
#include <fstream>
#include <set>
#include <sstream>

#include "simbench/errors.hpp"
#include "simbench/metrics.hpp"
#include "simbench/rng.hpp"

namespace simbench {

namespace {

std::string_view trim(std::string_view s) {
  const auto b = s.find_first_not_of(" \t\r");
  if (b == std::string_view::npos) return {};
  const auto e = s.find_last_not_of(" \t\r");
  return s.substr(b, e - b + 1);
}

std::vector<std::string> parse_list(std::string_view value) {
  std::vector<std::string> out;
  std::size_t start = 0;
  for (;;) {
    const auto pos = value.find(',', start);
    const auto item = trim(value.substr(start, pos - start));
    if (!item.empty()) out.emplace_back(item);
    if (pos == std::string_view::npos) break;
    start = pos + 1;
  }
  return out;
}

template <typename T>
T parse_number(std::string_view key, std::string_view value) {
  T v{};
  auto [ptr, ec] = std::from_chars(value.data(), value.data() + value.size(), v);
  if (ec != std::errc{} || ptr != value.data() + value.size())
    throw ConfigError("config: bad value for '" + std::string(key) + "': '" + std::string(value) + "'");
  return v;
}

bool parse_bool(std::string_view key, std::string_view value) {
  if (value == "true" || value == "1" || value == "yes") return true;
  if (value == "false" || value == "0" || value == "no") return false;
  throw ConfigError("config: bad boolean for '" + std::string(key) + "': '" + std::string(value) + "'");
}

template <typename T>
std::vector<T> parse_numbers(std::string_view key, std::string_view value) {
  std::vector<T> out;
  for (const auto& item : parse_list(value)) out.push_back(parse_number<T>(key, item));
  return out;
}

template <typename T>
void require_unique(std::vector<T> items, const char* key) {
  std::sort(items.begin(), items.end());
  if (std::adjacent_find(items.begin(), items.end()) != items.end())
    throw ConfigError(std::string("config: duplicate entry in '") + key + "'");
}

template <typename T>
std::string join(const std::vector<T>& items) {
  std::ostringstream os;
  for (std::size_t i = 0; i < items.size(); ++i) os << (i ? "," : "") << items[i];
  return os.str();
}

}  // namespace

StudyConfig parse_config(std::string_view text) {
  StudyConfig c;
  std::set<std::string> seen;
  std::size_t line_no = 0;
  std::size_t start = 0;
  while (start <= text.size()) {
    const auto end = text.find('\n', start);
    std::string_view line = text.substr(start, end - start);
    start = end == std::string_view::npos ? text.size() + 1 : end + 1;
    ++line_no;
    if (const auto hash = line.find('#'); hash != std::string_view::npos) line = line.substr(0, hash);
    line = trim(line);
    if (line.empty()) continue;
    const auto eq = line.find('=');
    if (eq == std::string_view::npos)
      throw ConfigError("config line " + std::to_string(line_no) + ": expected 'key = value'");
    const std::string key(trim(line.substr(0, eq)));
    const std::string_view value = trim(line.substr(eq + 1));
    if (!seen.insert(key).second) throw ConfigError("config: duplicate key '" + key + "'");

    if (key == "families") {
      c.registry.families = parse_list(value);
    } else if (key == "variants") {
      c.registry.variants = parse_list(value);
    } else if (key == "dimensions") {
      c.registry.dimensions = parse_numbers<int>(key, value);
    } else if (key == "holdout") {
      c.registry.holdout_size = parse_number<int>(key, value);
    } else if (key == "methods") {
      c.methods.clear();
      for (const auto& m : parse_list(value)) {
        try {
          c.methods.push_back(parse_method(m));
        } catch (const std::invalid_argument& e) {
          throw ConfigError(std::string("config: ") + e.what());
        }
      }
    } else if (key == "multipliers") {
      c.multipliers = parse_numbers<int>(key, value);
    } else if (key == "replicates") {
      c.replicates = parse_number<int>(key, value);
    } else if (key == "seed") {
      c.master_seed = parse_number<std::uint64_t>(key, value);
    } else if (key == "maximin_budget") {
      c.maximin_budget = parse_number<int>(key, value);
    } else if (key == "gp_starts") {
      c.gp.starts = parse_number<int>(key, value);
    } else if (key == "gp_evals_per_start") {
      c.gp.evals_per_start = parse_number<int>(key, value);
    } else if (key == "gp_min_length") {
      c.gp.min_length = parse_number<double>(key, value);
    } else if (key == "gp_max_length") {
      c.gp.max_length = parse_number<double>(key, value);
    } else if (key == "gp_nugget") {
      c.gp.nugget = parse_number<double>(key, value);
    } else if (key == "gp_max_nugget") {
      c.gp.max_nugget = parse_number<double>(key, value);
    } else if (key == "record_wall_time") {
      c.record_wall_time = parse_bool(key, value);
    } else if (key == "debug_models") {
      c.debug_models = parse_bool(key, value);
    } else if (key == "parallel") {
      c.parallelism = parse_number<int>(key, value);
    } else {
      throw ConfigError("config: unknown key '" + key + "'");
    }
  }
  return c;
}

StudyConfig load_config(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot read config file " + path.string());
  std::ostringstream os;
  os << in.rdbuf();
  return parse_config(os.str());
}

void validate(const StudyConfig& config) {
  if (config.replicates < 1) throw ConfigError("replicates must be >= 1");
  if (config.methods.empty()) throw ConfigError("methods must not be empty");
  if (config.multipliers.empty()) throw ConfigError("multipliers must not be empty");
  for (int m : config.multipliers)
    if (m <= 0) throw ConfigError("multipliers must be positive");
  if (config.registry.families.empty() || config.registry.variants.empty() || config.registry.dimensions.empty())
    throw ConfigError("registry needs at least one family, variant and dimension");
  if (config.registry.holdout_size < 1) throw ConfigError("holdout must be >= 1");
  if (config.maximin_budget < 0) throw ConfigError("maximin_budget must be >= 0");
  if (config.parallelism < 1) throw ConfigError("parallel must be >= 1");
  if (config.gp.starts < 1 || config.gp.evals_per_start < 1) throw ConfigError("gp_starts and gp_evals_per_start must be >= 1");
  if (!(config.gp.min_length > 0.0) || !(config.gp.max_length > config.gp.min_length))
    throw ConfigError("need 0 < gp_min_length < gp_max_length");
  if (!(config.gp.nugget > 0.0) || !(config.gp.max_nugget >= config.gp.nugget))
    throw ConfigError("need 0 < gp_nugget <= gp_max_nugget");
  require_unique(config.registry.families, "families");
  require_unique(config.registry.variants, "variants");
  require_unique(config.registry.dimensions, "dimensions");
  require_unique(config.methods, "methods");
  require_unique(config.multipliers, "multipliers");
  for (const auto& f : config.registry.families) parse_family(f);
  for (const auto& v : config.registry.variants) parse_variant(v);
  for (int d : config.registry.dimensions) {
    if (d < 1) throw ConfigError("dimensions must be positive");
    for (int m : config.multipliers)
      if (m * d < 2) throw ConfigError("size class " + std::to_string(m) + "d resolves to fewer than 2 points at d=" + std::to_string(d));
    const bool uses_sobol =
        std::find(config.methods.begin(), config.methods.end(), Method::M6_Sobol) != config.methods.end();
    if (uses_sobol && d > sobol_max_dimension())
      throw ConfigError("dimension " + std::to_string(d) + " exceeds the Sobol direction table (" +
                        std::to_string(sobol_max_dimension()) + ")");
  }
}

std::string canonical_config(const StudyConfig& c) {
  std::vector<std::string> methods;
  for (Method m : c.methods) methods.emplace_back(method_label(m));
  std::ostringstream os;
  os << "families = " << join(c.registry.families) << '\n'
     << "variants = " << join(c.registry.variants) << '\n'
     << "dimensions = " << join(c.registry.dimensions) << '\n'
     << "holdout = " << c.registry.holdout_size << '\n'
     << "methods = " << join(methods) << '\n'
     << "multipliers = " << join(c.multipliers) << '\n'
     << "seed = " << c.master_seed << '\n'
     << "maximin_budget = " << c.maximin_budget << '\n'
     << "gp_starts = " << c.gp.starts << '\n'
     << "gp_evals_per_start = " << c.gp.evals_per_start << '\n'
     << "gp_min_length = " << format_double(c.gp.min_length) << '\n'
     << "gp_max_length = " << format_double(c.gp.max_length) << '\n'
     << "gp_nugget = " << format_double(c.gp.nugget) << '\n'
     << "gp_max_nugget = " << format_double(c.gp.max_nugget) << '\n'
     << "record_wall_time = " << (c.record_wall_time ? "true" : "false") << '\n';
  return os.str();
}

std::string config_hash(const StudyConfig& config) {
  char hex[17];
  std::snprintf(hex, sizeof hex, "%016llx",
                static_cast<unsigned long long>(Hasher().add(canonical_config(config)).digest()));
  return hex;
}

}  // namespace simbench
