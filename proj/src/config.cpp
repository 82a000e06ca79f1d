#include "piezobeam/config.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <fstream>
#include <functional>
#include <map>
#include <numbers>
#include <sstream>

#include "piezobeam/mesh.hpp"

namespace piezobeam {

namespace {

constexpr double vacuum_permeability = 4.0e-7 * std::numbers::pi;

std::string join_issues(const std::vector<ConfigIssue>& issues) {
    std::ostringstream os;
    for (std::size_t i = 0; i < issues.size(); ++i) {
        if (i > 0) os << '\n';
        const auto& is = issues[i];
        if (is.line > 0) os << "line " << is.line << ", column " << is.column << ": ";
        os << to_string(is.code) << ": " << is.message;
    }
    return os.str();
}

std::string_view trim(std::string_view s) {
    const auto first = s.find_first_not_of(" \t\r");
    if (first == std::string_view::npos) return {};
    const auto last = s.find_last_not_of(" \t\r");
    return s.substr(first, last - first + 1);
}

std::string format_number(double v) {
    char buf[64];
    const auto res = std::to_chars(buf, buf + sizeof buf, v);
    return std::string(buf, res.ptr);
}

struct Location {
    int line = 0;
    int column = 0;
};

enum class Domain { Any, Positive, NonNegative };

class Parser {
public:
    explicit Parser(std::string_view text) : text_(text) {}

    RunConfig run();

private:
    using Handler = std::function<void(std::string_view, Location)>;

    void issue(ErrorCode code, Location at, std::string message) {
        issues_.push_back({code, at.line, at.column, std::move(message)});
    }

    std::optional<double> number(std::string_view value, Location at, Domain domain, std::string_view key) {
        double v = 0.0;
        const auto res = std::from_chars(value.data(), value.data() + value.size(), v);
        if (value.empty() || res.ec != std::errc() || res.ptr != value.data() + value.size()) {
            issue(ErrorCode::ParseError, at, "expected a number for '" + std::string(key) + "', got '" +
                                                 std::string(value) + "'");
            return std::nullopt;
        }
        if (!std::isfinite(v)) {
            issue(ErrorCode::UnitViolation, at, "'" + std::string(key) + "' must be finite");
            return std::nullopt;
        }
        if (domain == Domain::Positive && !(v > 0.0)) {
            issue(ErrorCode::UnitViolation, at, "'" + std::string(key) + "' must be positive");
            return std::nullopt;
        }
        if (domain == Domain::NonNegative && v < 0.0) {
            issue(ErrorCode::UnitViolation, at, "'" + std::string(key) + "' must not be negative");
            return std::nullopt;
        }
        return v;
    }

    std::optional<int> integer(std::string_view value, Location at, int minimum, std::string_view key) {
        int v = 0;
        const auto res = std::from_chars(value.data(), value.data() + value.size(), v);
        if (value.empty() || res.ec != std::errc() || res.ptr != value.data() + value.size()) {
            issue(ErrorCode::ParseError, at, "expected an integer for '" + std::string(key) + "', got '" +
                                                 std::string(value) + "'");
            return std::nullopt;
        }
        if (v < minimum) {
            issue(ErrorCode::UnitViolation, at,
                  "'" + std::string(key) + "' must be at least " + std::to_string(minimum));
            return std::nullopt;
        }
        return v;
    }

    std::optional<bool> boolean(std::string_view value, Location at, std::string_view key) {
        if (value == "true") return true;
        if (value == "false") return false;
        issue(ErrorCode::ParseError, at, "expected true or false for '" + std::string(key) + "'");
        return std::nullopt;
    }

    template <typename Enum>
    std::optional<Enum> choice(std::string_view value, Location at, std::string_view key,
                               const std::vector<std::pair<std::string_view, Enum>>& options) {
        for (const auto& [name, e] : options) {
            if (value == name) return e;
        }
        std::string names;
        for (const auto& [name, e] : options) names += (names.empty() ? "" : ", ") + std::string(name);
        issue(ErrorCode::ParseError, at, "'" + std::string(key) + "' must be one of " + names);
        return std::nullopt;
    }

    void register_material(const std::string& section, MaterialParams& m) {
        auto field = [&](const char* key, double MaterialParams::*member, Domain domain) {
            handlers_[section][key] = [this, &m, member, domain, key](std::string_view v, Location at) {
                if (auto x = number(v, at, domain, key)) m.*member = *x;
            };
        };
        field("rho", &MaterialParams::rho, Domain::Positive);
        field("c11", &MaterialParams::c11, Domain::Positive);
        field("c55", &MaterialParams::c55, Domain::Positive);
        field("gamma31", &MaterialParams::gamma31, Domain::Any);
        field("gamma15", &MaterialParams::gamma15, Domain::Any);
        field("eps1", &MaterialParams::eps1, Domain::Positive);
        field("eps3", &MaterialParams::eps3, Domain::Positive);
        field("mu", &MaterialParams::mu, Domain::NonNegative);
        required_[section] = {"rho", "c11", "c55", "eps1", "eps3"};
    }

    void register_voltage(const std::string& section, VoltageSignal& s) {
        handlers_[section]["kind"] = [this, &s](std::string_view v, Location at) {
            using K = VoltageSignal::Kind;
            if (auto k = choice<K>(v, at, "kind",
                                   {{"zero", K::Zero}, {"constant", K::Constant}, {"step", K::Step},
                                    {"sinusoid", K::Sinusoid}})) {
                s.kind = *k;
            }
        };
        handlers_[section]["amplitude"] = [this, &s](std::string_view v, Location at) {
            if (auto x = number(v, at, Domain::Any, "amplitude")) s.amplitude = *x;
        };
        handlers_[section]["frequency"] = [this, &s](std::string_view v, Location at) {
            if (auto x = number(v, at, Domain::NonNegative, "frequency")) s.frequency = *x;
        };
        handlers_[section]["step_time"] = [this, &s](std::string_view v, Location at) {
            if (auto x = number(v, at, Domain::NonNegative, "step_time")) s.step_time = *x;
        };
    }

    void register_handlers();
    void scan();
    void finish();

    std::string_view text_;
    std::vector<ConfigIssue> issues_;
    std::map<std::string, std::map<std::string, Handler>> handlers_;
    std::map<std::string, std::vector<std::string>> required_;
    std::map<std::string, Location> section_at_;
    std::map<std::string, std::map<std::string, Location>> seen_;

    RunConfig config_;
    MaterialParams beam_;
    MaterialParams patch_;
    VoltageSignal single_, top_, bottom_;
};

void Parser::register_handlers() {
    beam_.mu = vacuum_permeability;
    patch_.mu = vacuum_permeability;
    auto& model = handlers_["model"];
    model["variant"] = [this](std::string_view v, Location at) {
        if (auto x = choice<Variant>(v, at, "variant",
                                     {{"single-eb", Variant::SingleEB}, {"single-mt", Variant::SingleMT},
                                      {"patch-eb", Variant::PatchEB}, {"patch-mt", Variant::PatchMT}})) {
            config_.model.variant = *x;
        }
    };
    model["regime"] = [this](std::string_view v, Location at) {
        if (auto x = choice<Regime>(v, at, "regime",
                                    {{"full-magnetic", Regime::FullMagnetic},
                                     {"electrostatic", Regime::ElectrostaticReduced}})) {
            config_.model.regime = *x;
        }
    };
    model["bc"] = [this](std::string_view v, Location at) {
        if (auto x = choice<MechanicalBc>(v, at, "bc",
                                          {{"free-free", MechanicalBc::FreeFree},
                                           {"clamped-free", MechanicalBc::ClampedFree}})) {
            config_.model.bc = *x;
        }
    };
    required_["model"] = {"variant"};

    register_material("material.beam", beam_);
    register_material("material.patch", patch_);

    auto& geometry = handlers_["geometry"];
    auto length = [&](const char* key, double BeamGeometry::*member) {
        geometry[key] = [this, member, key](std::string_view v, Location at) {
            if (auto x = number(v, at, Domain::Positive, key)) config_.model.geometry.*member = *x;
        };
    };
    length("length", &BeamGeometry::length);
    length("thickness", &BeamGeometry::thickness);
    length("core_half_thickness", &BeamGeometry::core_half_thickness);
    length("patch_thickness", &BeamGeometry::patch_thickness);
    length("patch_begin", &BeamGeometry::patch_begin);
    length("patch_end", &BeamGeometry::patch_end);

    register_voltage("voltage", single_);
    register_voltage("voltage.top", top_);
    register_voltage("voltage.bottom", bottom_);

    handlers_["mesh"]["elements"] = [this](std::string_view v, Location at) {
        if (auto x = integer(v, at, 1, "elements")) config_.elements = *x;
    };

    auto& solver = handlers_["solver"];
    solver["dt"] = [this](std::string_view v, Location at) {
        if (auto x = number(v, at, Domain::Positive, "dt")) config_.dt = *x;
    };
    solver["t_end"] = [this](std::string_view v, Location at) {
        if (auto x = number(v, at, Domain::Positive, "t_end")) config_.t_end = *x;
    };
    solver["integrator"] = [this](std::string_view v, Location at) {
        if (auto x = choice<Integrator>(v, at, "integrator",
                                        {{"midpoint", Integrator::Midpoint}, {"newmark", Integrator::Newmark}})) {
            config_.integrator = *x;
        }
    };
    solver["newmark_beta"] = [this](std::string_view v, Location at) {
        if (auto x = number(v, at, Domain::Positive, "newmark_beta")) config_.newmark_beta = *x;
    };
    solver["newmark_gamma"] = [this](std::string_view v, Location at) {
        if (auto x = number(v, at, Domain::Positive, "newmark_gamma")) config_.newmark_gamma = *x;
    };
    solver["reduced_shear"] = [this](std::string_view v, Location at) {
        if (auto x = boolean(v, at, "reduced_shear")) config_.reduced_shear = *x;
    };
    solver["threads"] = [this](std::string_view v, Location at) {
        if (auto x = integer(v, at, 1, "threads")) config_.threads = *x;
    };

    auto& output = handlers_["output"];
    output["directory"] = [this](std::string_view v, Location at) {
        if (v.empty()) {
            issue(ErrorCode::ParseError, at, "'directory' must not be empty");
        } else {
            config_.output_directory = std::string(v);
        }
    };
    output["stride"] = [this](std::string_view v, Location at) {
        if (auto x = integer(v, at, 1, "stride")) config_.stride = *x;
    };
    output["svg"] = [this](std::string_view v, Location at) {
        if (auto x = boolean(v, at, "svg")) config_.svg = *x;
    };

    handlers_["debug"]["flip_bottom_coupling"] = [this](std::string_view v, Location at) {
        if (auto x = boolean(v, at, "flip_bottom_coupling")) config_.flip_bottom_coupling = *x;
    };
}

void Parser::scan() {
    std::string section;
    bool section_valid = false;
    int line_no = 0;
    std::size_t pos = 0;
    while (pos <= text_.size()) {
        const std::size_t end = std::min(text_.find('\n', pos), text_.size());
        const std::string_view raw = text_.substr(pos, end - pos);
        pos = end + 1;
        ++line_no;
        const std::string_view line = trim(raw);
        const int indent = static_cast<int>(raw.find_first_not_of(" \t")) + 1;
        if (line.empty() || line.front() == '#' || line.front() == ';') continue;

        if (line.front() == '[') {
            const Location at{line_no, indent};
            if (line.back() != ']') {
                issue(ErrorCode::ParseError, at, "unterminated section header");
                section_valid = false;
                continue;
            }
            section = std::string(trim(line.substr(1, line.size() - 2)));
            if (!handlers_.count(section)) {
                issue(ErrorCode::UnknownKey, {line_no, indent + 1}, "unknown section [" + section + "]");
                section_valid = false;
            } else if (section_at_.count(section)) {
                issue(ErrorCode::ParseError, at, "section [" + section + "] appears twice");
                section_valid = false;
            } else {
                section_at_[section] = at;
                section_valid = true;
            }
            continue;
        }

        const auto eq = line.find('=');
        if (eq == std::string_view::npos) {
            issue(ErrorCode::ParseError, {line_no, indent}, "expected 'key = value'");
            continue;
        }
        const std::string key(trim(line.substr(0, eq)));
        std::string_view value = line.substr(eq + 1);
        for (std::size_t i = 0; i < value.size(); ++i) {
            if ((value[i] == '#' || value[i] == ';') && i > 0 && (value[i - 1] == ' ' || value[i - 1] == '\t')) {
                value = value.substr(0, i);
                break;
            }
        }
        value = trim(value);
        const std::size_t value_offset =
            value.empty() ? raw.find('=') + 1 : static_cast<std::size_t>(value.data() - raw.data());
        const Location key_at{line_no, indent};
        const Location value_at{line_no, static_cast<int>(value_offset) + 1};
        if (section.empty()) {
            issue(ErrorCode::ParseError, key_at, "key '" + key + "' outside of any section");
            continue;
        }
        if (!section_valid) continue;
        auto& keys = handlers_[section];
        const auto h = keys.find(key);
        if (h == keys.end()) {
            issue(ErrorCode::UnknownKey, key_at, "unknown key '" + key + "' in [" + section + "]");
            continue;
        }
        if (seen_[section].count(key)) {
            issue(ErrorCode::ParseError, key_at, "key '" + key + "' repeated in [" + section + "]");
            continue;
        }
        seen_[section][key] = value_at;
        h->second(value, value_at);
    }
}

void Parser::finish() {
    ModelSpec& m = config_.model;
    const bool patch = is_patch(m.variant);
    auto present = [&](const std::string& s) { return section_at_.count(s) > 0; };
    auto has_key = [&](const std::string& s, const std::string& k) { return seen_[s].count(k) > 0; };
    auto require = [&](const std::string& s, const std::vector<std::string>& keys) {
        for (const auto& k : keys) {
            if (has_key(s, k)) continue;
            const Location at = present(s) ? section_at_[s] : Location{};
            issue(ErrorCode::ParseError, at, "missing required key '" + k + "' in [" + s + "]");
        }
    };

    require("model", required_["model"]);
    require("material.beam", required_["material.beam"]);
    require("geometry", patch ? std::vector<std::string>{"length", "core_half_thickness", "patch_thickness",
                                                          "patch_begin", "patch_end"}
                              : std::vector<std::string>{"length", "thickness"});
    auto reject_section = [&](const std::string& s, const std::string& why) {
        if (present(s)) issue(ErrorCode::UnknownKey, section_at_[s], "section [" + s + "] " + why);
    };
    if (patch) {
        require("material.patch", required_["material.patch"]);
        reject_section("voltage", "is for single-beam variants; use [voltage.top] and [voltage.bottom]");
        m.patch_material = patch_;
        m.voltages = {top_, bottom_};
    } else {
        reject_section("material.patch", "needs a patch variant");
        reject_section("voltage.top", "needs a patch variant");
        reject_section("voltage.bottom", "needs a patch variant");
        for (const char* k : {"core_half_thickness", "patch_thickness", "patch_begin", "patch_end"}) {
            if (has_key("geometry", k)) {
                issue(ErrorCode::UnknownKey, seen_["geometry"][k],
                      std::string("geometry key '") + k + "' needs a patch variant");
            }
        }
        m.patch_material.reset();
        m.voltages = {single_};
    }
    m.beam_material = beam_;

    const BeamGeometry& g = m.geometry;
    if (patch && has_key("geometry", "patch_begin") && has_key("geometry", "patch_end") &&
        has_key("geometry", "length")) {
        if (!(g.patch_begin < g.patch_end)) {
            issue(ErrorCode::UnitViolation, seen_["geometry"]["patch_end"], "patch_end must exceed patch_begin");
        } else if (!(g.patch_end < g.length)) {
            issue(ErrorCode::UnitViolation, seen_["geometry"]["patch_end"], "patch_end must be below length");
        }
    }
    for (const auto& [name, s] : std::vector<std::pair<std::string, VoltageSignal>>{
             {"voltage", single_}, {"voltage.top", top_}, {"voltage.bottom", bottom_}}) {
        if (present(name) && s.kind == VoltageSignal::Kind::Sinusoid && !has_key(name, "frequency")) {
            issue(ErrorCode::ParseError, section_at_[name], "a sinusoid needs 'frequency'");
        }
    }
    if (!issues_.empty()) return;

    try {
        const ValidatedModelSpec spec = validate_spec(m);
        build_mesh(spec, config_.elements);
    } catch (const ValidationError& e) {
        for (const auto& v : e.violations()) issue(ErrorCode::UnitViolation, {}, v.message);
    } catch (const Error& e) {
        const Location at = has_key("mesh", "elements") ? seen_["mesh"]["elements"] : Location{};
        issue(ErrorCode::UnitViolation, at, e.what());
    }
}

RunConfig Parser::run() {
    register_handlers();
    scan();
    finish();
    if (!issues_.empty()) throw ConfigError(issues_);
    return config_;
}

void write_material(std::ostringstream& os, const char* section, const MaterialParams& m) {
    os << '[' << section << "]\n"
       << "rho = " << format_number(m.rho) << '\n'
       << "c11 = " << format_number(m.c11) << '\n'
       << "c55 = " << format_number(m.c55) << '\n'
       << "gamma31 = " << format_number(m.gamma31) << '\n'
       << "gamma15 = " << format_number(m.gamma15) << '\n'
       << "eps1 = " << format_number(m.eps1) << '\n'
       << "eps3 = " << format_number(m.eps3) << '\n'
       << "mu = " << format_number(m.mu) << "\n\n";
}

void write_voltage(std::ostringstream& os, const char* section, const VoltageSignal& s) {
    os << '[' << section << "]\n"
       << "kind = " << to_string(s.kind) << '\n'
       << "amplitude = " << format_number(s.amplitude) << '\n'
       << "frequency = " << format_number(s.frequency) << '\n'
       << "step_time = " << format_number(s.step_time) << "\n\n";
}

}  // namespace

ConfigError::ConfigError(std::vector<ConfigIssue> issues)
    : Error(issues.empty() ? ErrorCode::ParseError : issues.front().code, join_issues(issues)),
      issues_(std::move(issues)) {}

ValidatedModelSpec RunConfig::validated() const { return validate_spec(model); }

double RunConfig::time_step() const { return dt ? *dt : heuristic_time_step(validated(), elements); }

double RunConfig::end_time() const { return t_end ? *t_end : heuristic_end_time(validated()); }

RunSettings RunConfig::run_settings() const {
    RunSettings s;
    s.elements = elements;
    s.dt = time_step();
    s.t_end = end_time();
    s.integrator = {integrator, newmark_beta, newmark_gamma};
    s.assembly.energy.reduced_shear_integration = reduced_shear;
    s.assembly.energy.flip_bottom_coupling = flip_bottom_coupling;
    return s;
}

RunConfig parse_config(std::string_view text) { return Parser(text).run(); }

RunConfig load_config(const std::filesystem::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw ConfigError({{ErrorCode::ParseError, 0, 0, "cannot read " + path.string()}});
    std::ostringstream text;
    text << in.rdbuf();
    return parse_config(text.str());
}

std::string serialize_config(const RunConfig& c) {
    const ModelSpec& m = c.model;
    std::ostringstream os;
    os << "[model]\n"
       << "variant = " << to_string(m.variant) << '\n'
       << "regime = " << to_string(m.regime) << '\n'
       << "bc = " << to_string(m.bc) << "\n\n";
    write_material(os, "material.beam", m.beam_material);
    if (m.patch_material) write_material(os, "material.patch", *m.patch_material);

    const BeamGeometry& g = m.geometry;
    os << "[geometry]\nlength = " << format_number(g.length) << '\n';
    if (!is_patch(m.variant) || g.thickness > 0.0) os << "thickness = " << format_number(g.thickness) << '\n';
    if (is_patch(m.variant)) {
        os << "core_half_thickness = " << format_number(g.core_half_thickness) << '\n'
           << "patch_thickness = " << format_number(g.patch_thickness) << '\n'
           << "patch_begin = " << format_number(g.patch_begin) << '\n'
           << "patch_end = " << format_number(g.patch_end) << '\n';
    }
    os << '\n';
    if (is_patch(m.variant)) {
        write_voltage(os, "voltage.top", m.voltages.at(0));
        write_voltage(os, "voltage.bottom", m.voltages.at(1));
    } else {
        write_voltage(os, "voltage", m.voltages.at(0));
    }

    os << "[mesh]\nelements = " << c.elements << "\n\n[solver]\n";
    if (c.dt) os << "dt = " << format_number(*c.dt) << '\n';
    if (c.t_end) os << "t_end = " << format_number(*c.t_end) << '\n';
    os << "integrator = " << (c.integrator == Integrator::Midpoint ? "midpoint" : "newmark") << '\n'
       << "newmark_beta = " << format_number(c.newmark_beta) << '\n'
       << "newmark_gamma = " << format_number(c.newmark_gamma) << '\n'
       << "reduced_shear = " << (c.reduced_shear ? "true" : "false") << '\n'
       << "threads = " << c.threads << "\n\n";
    os << "[output]\ndirectory = " << c.output_directory << '\n'
       << "stride = " << c.stride << '\n'
       << "svg = " << (c.svg ? "true" : "false") << '\n';
    if (c.flip_bottom_coupling) os << "\n[debug]\nflip_bottom_coupling = true\n";
    return os.str();
}

double heuristic_time_step(const ValidatedModelSpec& spec, int elements) {
    const Mesh mesh = build_mesh(spec, elements);
    const double he = mesh.min_element_length();
    std::vector<const DerivedCoefficients*> materials{&spec.beam()};
    if (is_patch(spec.variant())) materials.push_back(&spec.patch());
    const BeamGeometry& g = spec.geometry();
    const double thickness = is_patch(spec.variant()) ? 2.0 * (g.core_half_thickness + g.patch_thickness)
                                                      : g.thickness;
    double c = 0.0;
    for (const DerivedCoefficients* d : materials) {
        const double rod = std::sqrt(d->alpha1 / d->rho);
        // Phase speed of the shortest E-B bending wave the mesh resolves.
        const double bending = rod * thickness / std::sqrt(12.0) * std::numbers::pi / he;
        c = std::max({c, rod, is_euler_bernoulli(spec.variant()) ? bending : 0.0});
    }
    return 0.5 * he / c;
}

double heuristic_end_time(const ValidatedModelSpec& spec) {
    double c = std::sqrt(spec.beam().alpha1 / spec.beam().rho);
    if (is_patch(spec.variant())) c = std::min(c, std::sqrt(spec.patch().alpha1 / spec.patch().rho));
    return 4.0 * spec.geometry().length / c;
}

}  // namespace piezobeam
