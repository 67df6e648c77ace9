#include "csfg/run_config.hpp"

#include <algorithm>
#include <array>
#include <cctype>
#include <charconv>
#include <cmath>
#include <fstream>
#include <functional>
#include <set>
#include <sstream>
#include <vector>

namespace csfg {

namespace {

enum class Dimension { none, frequency, time, gdd, quartic, phase };

struct UnitScale {
  std::string_view suffix;
  double scale;
};

// Suffixes are matched case-sensitively after whitespace is stripped.
constexpr std::array kFrequencyUnits{UnitScale{"Hz", 1.0},   UnitScale{"kHz", 1e3},
                                     UnitScale{"MHz", 1e6},  UnitScale{"GHz", 1e9},
                                     UnitScale{"THz", 1e12}, UnitScale{"PHz", 1e15}};
constexpr std::array kTimeUnits{UnitScale{"s", 1.0},    UnitScale{"ms", 1e-3},
                                UnitScale{"us", 1e-6},  UnitScale{"ns", 1e-9},
                                UnitScale{"ps", 1e-12}, UnitScale{"fs", 1e-15}};
constexpr std::array kGddUnits{UnitScale{"s2", 1.0}, UnitScale{"s^2", 1.0},
                               UnitScale{"ps2", 1e-24}, UnitScale{"ps^2", 1e-24},
                               UnitScale{"fs2", 1e-30}, UnitScale{"fs^2", 1e-30}};
constexpr std::array kQuarticUnits{UnitScale{"s4", 1.0}, UnitScale{"s^4", 1.0},
                                   UnitScale{"ps4", 1e-48}, UnitScale{"ps^4", 1e-48},
                                   UnitScale{"fs4", 1e-60}, UnitScale{"fs^4", 1e-60}};
constexpr std::array kPhaseUnits{UnitScale{"rad", 1.0}, UnitScale{"mrad", 1e-3},
                                 UnitScale{"pi", kPi}, UnitScale{"deg", kPi / 180.0}};

std::string_view base_unit(Dimension d) {
  switch (d) {
    case Dimension::frequency: return "Hz";
    case Dimension::time: return "s";
    case Dimension::gdd: return "s2";
    case Dimension::quartic: return "s4";
    case Dimension::phase: return "rad";
    case Dimension::none: break;
  }
  return "";
}

template <std::size_t N>
std::optional<double> lookup(const std::array<UnitScale, N>& table, std::string_view unit) {
  for (const auto& u : table) {
    if (u.suffix == unit) return u.scale;
  }
  return std::nullopt;
}

std::optional<double> unit_scale(Dimension d, std::string_view unit) {
  if (unit.empty()) return 1.0;
  switch (d) {
    case Dimension::frequency: return lookup(kFrequencyUnits, unit);
    case Dimension::time: return lookup(kTimeUnits, unit);
    case Dimension::gdd: return lookup(kGddUnits, unit);
    case Dimension::quartic: return lookup(kQuarticUnits, unit);
    case Dimension::phase: return lookup(kPhaseUnits, unit);
    case Dimension::none: break;
  }
  return std::nullopt;
}

std::string_view trim(std::string_view s) {
  while (!s.empty() && std::isspace(static_cast<unsigned char>(s.front()))) s.remove_prefix(1);
  while (!s.empty() && std::isspace(static_cast<unsigned char>(s.back()))) s.remove_suffix(1);
  return s;
}

double parse_quantity(const std::string& key, std::string_view text, Dimension d) {
  text = trim(text);
  double value = 0.0;
  const char* first = text.data();
  const char* last = text.data() + text.size();
  if (!text.empty() && *first == '+') ++first;
  const auto [ptr, ec] = std::from_chars(first, last, value);
  if (ec != std::errc{} || ptr == first) {
    throw ConfigError(key, "expected a number, got '" + std::string(text) + "'");
  }
  const std::string_view unit = trim(std::string_view(ptr, static_cast<std::size_t>(last - ptr)));
  const auto scale = unit_scale(d, unit);
  if (!scale) throw ConfigError(key, "unknown unit '" + std::string(unit) + "'");
  if (!std::isfinite(value)) throw ConfigError(key, "value must be finite");
  return value * *scale;
}

std::size_t parse_count(const std::string& key, std::string_view text) {
  text = trim(text);
  std::size_t value = 0;
  const auto [ptr, ec] = std::from_chars(text.data(), text.data() + text.size(), value);
  if (ec != std::errc{} || ptr != text.data() + text.size()) {
    throw ConfigError(key, "expected a non-negative integer, got '" + std::string(text) + "'");
  }
  return value;
}

bool parse_bool(const std::string& key, std::string_view text) {
  text = trim(text);
  if (text == "true" || text == "yes" || text == "1") return true;
  if (text == "false" || text == "no" || text == "0") return false;
  throw ConfigError(key, "expected true or false, got '" + std::string(text) + "'");
}

struct Field {
  std::string key;
  std::function<void(RunConfig&, const std::string& key, std::string_view)> set;
  std::function<std::string(const RunConfig&)> get;
};

std::string quantity_string(double value, Dimension d) {
  std::string s = format_double(value);
  const auto unit = base_unit(d);
  if (!unit.empty()) {
    s += ' ';
    s += unit;
  }
  return s;
}

struct Bounds {
  double lo = -HUGE_VAL;
  double hi = HUGE_VAL;
  bool lo_open = false;
};

void check_bounds(const std::string& key, double v, Bounds b) {
  const bool low_ok = b.lo_open ? v > b.lo : v >= b.lo;
  if (!low_ok || v > b.hi) {
    std::string range = std::string(b.lo_open ? "(" : "[") + format_double(b.lo) + ", " +
                        format_double(b.hi) + "]";
    throw ConfigError(key, "value " + format_double(v) + " outside " + range);
  }
}

constexpr Bounds kPositive{0.0, HUGE_VAL, true};
constexpr Bounds kNonNegative{0.0, HUGE_VAL, false};
constexpr Bounds kUnit{0.0, 1.0, false};
constexpr Bounds kAny{};

template <typename Section>
Field quantity(std::string key, Section RunConfig::*section, double Section::*member, Dimension d,
               Bounds b) {
  return Field{
      std::move(key),
      [=](RunConfig& c, const std::string& k, std::string_view text) {
        const double v = parse_quantity(k, text, d);
        check_bounds(k, v, b);
        c.*section.*member = v;
      },
      [=](const RunConfig& c) { return quantity_string(c.*section.*member, d); }};
}

template <typename Section>
Field optional_quantity(std::string key, Section RunConfig::*section,
                        std::optional<double> Section::*member, Dimension d, Bounds b) {
  return Field{std::move(key),
               [=](RunConfig& c, const std::string& k, std::string_view text) {
                 if (trim(text) == "auto") {
                   (c.*section.*member).reset();
                   return;
                 }
                 const double v = parse_quantity(k, text, d);
                 check_bounds(k, v, b);
                 c.*section.*member = v;
               },
               [=](const RunConfig& c) {
                 const auto& v = c.*section.*member;
                 return v ? quantity_string(*v, d) : std::string("auto");
               }};
}

template <typename Section>
Field count(std::string key, Section RunConfig::*section, std::size_t Section::*member,
            std::size_t minimum) {
  return Field{std::move(key),
               [=](RunConfig& c, const std::string& k, std::string_view text) {
                 const std::size_t v = parse_count(k, text);
                 if (v < minimum) {
                   throw ConfigError(k, "must be at least " + std::to_string(minimum));
                 }
                 c.*section.*member = v;
               },
               [=](const RunConfig& c) { return std::to_string(c.*section.*member); }};
}

template <typename Section, typename Enum>
Field enumeration(std::string key, Section RunConfig::*section, Enum Section::*member,
                  Enum (*parse)(std::string_view), std::string_view (*name)(Enum)) {
  return Field{std::move(key),
               [=](RunConfig& c, const std::string& k, std::string_view text) {
                 try {
                   c.*section.*member = parse(trim(text));
                 } catch (const std::invalid_argument& e) {
                   throw ConfigError(k, e.what());
                 }
               },
               [=](const RunConfig& c) { return std::string(name(c.*section.*member)); }};
}

const std::vector<Field>& fields() {
  static const std::vector<Field> table = [] {
    using D = Dimension;
    std::vector<Field> f;
    f.push_back(quantity("grid.bandwidth", &RunConfig::grid, &GridSettings::bandwidth, D::frequency, kPositive));
    f.push_back(quantity("grid.resolution", &RunConfig::grid, &GridSettings::resolution, D::frequency, kPositive));
    f.push_back(quantity("grid.center", &RunConfig::grid, &GridSettings::center, D::frequency, kNonNegative));
    f.push_back(enumeration("grid.density", &RunConfig::grid, &GridSettings::density,
                            &parse_density_shape, &to_string));

    f.push_back(quantity("phase.global", &RunConfig::phase, &PhaseProfile::global_phase, D::phase, kAny));
    f.push_back(quantity("phase.gdd", &RunConfig::phase, &PhaseProfile::gdd, D::gdd, kAny));
    f.push_back(quantity("phase.quartic", &RunConfig::phase, &PhaseProfile::quartic, D::quartic, kAny));
    f.push_back(enumeration("phase.convention", &RunConfig::phase, &PhaseProfile::convention,
                            &parse_frequency_convention, &to_string));
    f.push_back(quantity("dither.amplitude", &RunConfig::phase, &PhaseProfile::dither_amplitude, D::phase, kNonNegative));
    // Stored as rad/s. Accepts "rad/s" verbatim or an ordinary frequency.
    f.push_back(Field{"dither.frequency",
                      [](RunConfig& c, const std::string& k, std::string_view text) {
                        text = trim(text);
                        double v = 0.0;
                        if (text.ends_with("rad/s")) {
                          text.remove_suffix(5);
                          v = parse_quantity(k, text, D::none);
                        } else {
                          v = 2.0 * kPi * parse_quantity(k, text, D::frequency);
                        }
                        check_bounds(k, v, kNonNegative);
                        c.phase.dither_frequency = v;
                      },
                      [](const RunConfig& c) {
                        return format_double(c.phase.dither_frequency) + " rad/s";
                      }});

    f.push_back(quantity("parametric.pump_amplitude", &RunConfig::parametric, &ParametricConfig::pump_amplitude, D::none, kNonNegative));
    f.push_back(quantity("parametric.pump_phase", &RunConfig::parametric, &ParametricConfig::pump_phase, D::phase, kAny));
    f.push_back(quantity("parametric.coupling", &RunConfig::parametric, &ParametricConfig::coupling, D::none, kNonNegative));
    f.push_back(quantity("parametric.shaper_transmission", &RunConfig::parametric, &ParametricConfig::shaper_transmission, D::none, kUnit));
    f.push_back(quantity("parametric.residue_amplitude", &RunConfig::parametric, &ParametricConfig::residue_amplitude, D::none, kNonNegative));
    f.push_back(quantity("parametric.residue_phase", &RunConfig::parametric, &ParametricConfig::residue_phase, D::phase, kAny));

    f.push_back(quantity("seed.amplitude", &RunConfig::seed, &SeedConfig::amplitude, D::none, kNonNegative));
    f.push_back(quantity("seed.pair_phase", &RunConfig::seed, &SeedConfig::pair_phase_setpoint, D::phase, kAny));
    f.push_back(Field{"seed.offset",
                      [](RunConfig& c, const std::string& k, std::string_view text) {
                        if (trim(text) == "none") {
                          c.seed.mode_offset.reset();
                          return;
                        }
                        const double v = parse_quantity(k, text, D::frequency);
                        check_bounds(k, v, kPositive);
                        c.seed.mode_offset = v;
                      },
                      [](const RunConfig& c) {
                        return c.seed.mode_offset ? quantity_string(*c.seed.mode_offset, D::frequency)
                                                  : std::string("none");
                      }});

    f.push_back(enumeration("lockin.mode", &RunConfig::lockin, &LockinOptions::mode,
                            &parse_demodulation_mode, &to_string));
    f.push_back(count("lockin.samples", &RunConfig::lockin, &LockinOptions::samples, kMinDemodulationSamples));
    f.push_back(Field{"run.workers",
                      [](RunConfig& c, const std::string& k, std::string_view text) {
                        const std::size_t v = parse_count(k, text);
                        if (v < 1 || v > 1024) throw ConfigError(k, "must lie in [1, 1024]");
                        c.lockin.workers = static_cast<unsigned>(v);
                      },
                      [](const RunConfig& c) { return std::to_string(c.lockin.workers); }});
    f.push_back(Field{"run.seed",
                      [](RunConfig& c, const std::string& k, std::string_view text) {
                        c.rng_seed = parse_count(k, text);
                      },
                      [](const RunConfig& c) { return std::to_string(c.rng_seed); }});

    f.push_back(count("scan.points", &RunConfig::scan, &ScanSettings::points, 2));
    f.push_back(optional_quantity("scan.gdd_min", &RunConfig::scan, &ScanSettings::gdd_min, D::gdd, kAny));
    f.push_back(optional_quantity("scan.gdd_max", &RunConfig::scan, &ScanSettings::gdd_max, D::gdd, kAny));
    f.push_back(quantity("scan.loss_min", &RunConfig::scan, &ScanSettings::loss_min, D::none, kUnit));
    f.push_back(quantity("scan.loss_max", &RunConfig::scan, &ScanSettings::loss_max, D::none, kUnit));
    f.push_back(Field{"scan.compensate_seed",
                      [](RunConfig& c, const std::string& k, std::string_view text) {
                        c.scan.compensate_seed = parse_bool(k, text);
                      },
                      [](const RunConfig& c) {
                        return std::string(c.scan.compensate_seed ? "true" : "false");
                      }});
    f.push_back(quantity("scan.residue_min", &RunConfig::scan, &ScanSettings::residue_min, D::phase, kAny));
    f.push_back(quantity("scan.residue_max", &RunConfig::scan, &ScanSettings::residue_max, D::phase, kAny));

    f.push_back(count("oracle.pairs", &RunConfig::oracle, &OracleSettings::pairs, 1));
    f.push_back(quantity("oracle.pump_amplitude", &RunConfig::oracle, &OracleSettings::pump_amplitude, D::none, kPositive));
    f.push_back(quantity("oracle.chi_t", &RunConfig::oracle, &OracleSettings::chi_t, D::none, kNonNegative));
    f.push_back(Field{"oracle.pump_truncation",
                      [](RunConfig& c, const std::string& k, std::string_view text) {
                        if (trim(text) == "auto") {
                          c.oracle.pump_truncation.reset();
                          return;
                        }
                        const std::size_t v = parse_count(k, text);
                        if (v < 1) throw ConfigError(k, "must be at least 1");
                        c.oracle.pump_truncation = v;
                      },
                      [](const RunConfig& c) {
                        return c.oracle.pump_truncation ? std::to_string(*c.oracle.pump_truncation)
                                                        : std::string("auto");
                      }});
    f.push_back(count("oracle.pair_truncation", &RunConfig::oracle, &OracleSettings::pair_truncation, 1));
    f.push_back(enumeration("oracle.scenario", &RunConfig::oracle, &OracleSettings::scenario,
                            &parse_oracle_scenario, &to_string));
    f.push_back(quantity("oracle.seed_amplitude", &RunConfig::oracle, &OracleSettings::seed_amplitude, D::none, kNonNegative));

    f.push_back(count("matched_filter.bins", &RunConfig::matched_filter, &MatchedFilterSettings::bins, 1));
    f.push_back(quantity("matched_filter.spacing", &RunConfig::matched_filter, &MatchedFilterSettings::spacing, D::frequency, kPositive));
    f.push_back(quantity("matched_filter.noise_variance", &RunConfig::matched_filter, &MatchedFilterSettings::noise_variance, D::none, kNonNegative));
    f.push_back(count("matched_filter.draws", &RunConfig::matched_filter, &MatchedFilterSettings::draws, 1));

    f.push_back(optional_quantity("separability.delta_t", &RunConfig::separability, &SeparabilitySettings::delta_t, D::time, kPositive));
    f.push_back(quantity("separability.delta_nu_sum", &RunConfig::separability, &SeparabilitySettings::delta_nu_sum, D::frequency, kPositive));
    return f;
  }();
  return table;
}

void validate_cross_fields(const RunConfig& c) {
  if (c.grid.resolution > c.grid.bandwidth) {
    throw ConfigError("grid.resolution", "must not exceed grid.bandwidth");
  }
  if (c.oracle.pairs > 2) throw ConfigError("oracle.pairs", "must be 1 or 2");
  if (!(c.scan.loss_max > c.scan.loss_min)) {
    throw ConfigError("scan.loss_max", "must exceed scan.loss_min");
  }
  if (c.scan.compensate_seed && !(c.scan.loss_min > 0.0)) {
    throw ConfigError("scan.loss_min", "must be positive when scan.compensate_seed is true");
  }
  if (!(c.scan.residue_max > c.scan.residue_min)) {
    throw ConfigError("scan.residue_max", "must exceed scan.residue_min");
  }
  const auto [lo, hi] = c.gdd_range();
  if (!(hi > lo)) throw ConfigError("scan.gdd_max", "must exceed scan.gdd_min");
  if (c.seed.mode_offset) {
    try {
      c.build_grid().pair_index(*c.seed.mode_offset);
    } catch (const std::invalid_argument& e) {
      throw ConfigError("seed.offset", e.what());
    }
  }
}

}  // namespace

std::string format_double(double value) {
  std::array<char, 64> buf{};
  const auto [ptr, ec] =
      std::to_chars(buf.data(), buf.data() + buf.size(), value, std::chars_format::general, 17);
  return std::string(buf.data(), ptr);
}

RunConfig::RunConfig() {
  phase.dither_amplitude = 0.5;
  phase.dither_frequency = 2.0 * kPi * 173e3;
}

ModeGrid RunConfig::build_grid() const {
  return csfg::build_grid(grid.bandwidth, grid.resolution, grid.center, grid.density);
}

std::pair<double, double> RunConfig::gdd_range() const {
  const double width = predicted_gdd_width(grid.bandwidth, phase.convention);
  return {scan.gdd_min.value_or(-10.0 * width), scan.gdd_max.value_or(10.0 * width)};
}

double RunConfig::separability_delta_t() const {
  return separability.delta_t.value_or(1.0 / grid.bandwidth);
}

RunConfig parse_run_config(std::string_view text) {
  RunConfig config;
  std::set<std::string> seen;
  std::size_t line_no = 0;
  while (!text.empty()) {
    const auto eol = text.find('\n');
    std::string_view line = text.substr(0, eol);
    text = eol == std::string_view::npos ? std::string_view{} : text.substr(eol + 1);
    ++line_no;

    if (const auto hash = line.find('#'); hash != std::string_view::npos) line = line.substr(0, hash);
    line = trim(line);
    if (line.empty()) continue;

    const auto eq = line.find('=');
    if (eq == std::string_view::npos) {
      throw ConfigError("line " + std::to_string(line_no), "expected 'key = value'");
    }
    const std::string key(trim(line.substr(0, eq)));
    const std::string_view value = trim(line.substr(eq + 1));

    const auto& table = fields();
    const auto it = std::find_if(table.begin(), table.end(), [&](const Field& f) { return f.key == key; });
    if (it == table.end()) throw ConfigError(key, "unknown key");
    if (!seen.insert(key).second) throw ConfigError(key, "duplicate key");
    if (value.empty()) throw ConfigError(key, "missing value");
    it->set(config, key, value);
  }
  validate_cross_fields(config);
  return config;
}

RunConfig load_run_config(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw ConfigError("--config", "cannot open " + path.string());
  std::ostringstream buf;
  buf << in.rdbuf();
  return parse_run_config(buf.str());
}

std::map<std::string, std::string> config_snapshot(const RunConfig& config) {
  std::map<std::string, std::string> out;
  for (const auto& f : fields()) out.emplace(f.key, f.get(config));
  return out;
}

std::string render_config(const RunConfig& config) {
  std::string out;
  for (const auto& [key, value] : config_snapshot(config)) {
    out += key;
    out += " = ";
    out += value;
    out += '\n';
  }
  return out;
}

}  // namespace csfg
