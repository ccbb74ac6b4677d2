#include "atomlens/config.hpp"

#include <cstdio>
#include <fstream>
#include <sstream>
#include <stdexcept>

#include "json.hpp"

namespace atomlens {

namespace {

using nlohmann::json;

[[noreturn]] void fail(const std::string& msg) {
  throw std::invalid_argument("config: " + msg);
}

void check_keys(const json& j, const std::string& section,
                std::initializer_list<const char*> allowed) {
  if (!j.is_object()) fail(section + " must be an object");
  for (const auto& item : j.items()) {
    bool ok = false;
    for (const char* a : allowed)
      if (item.key() == a) {
        ok = true;
        break;
      }
    if (!ok) fail("unknown key \"" + item.key() + "\" in " + section);
  }
}

double num(const json& j, const char* key, double dflt) {
  if (!j.contains(key) || j[key].is_null()) return dflt;
  if (!j[key].is_number()) fail(std::string(key) + " must be a number");
  return j[key].get<double>();
}

std::optional<double> opt_num(const json& j, const char* key,
                              std::optional<double> dflt = std::nullopt) {
  if (!j.contains(key) || j[key].is_null()) return dflt;
  if (!j[key].is_number()) fail(std::string(key) + " must be a number");
  return j[key].get<double>();
}

bool flag(const json& j, const char* key, bool dflt) {
  if (!j.contains(key) || j[key].is_null()) return dflt;
  if (!j[key].is_boolean()) fail(std::string(key) + " must be a boolean");
  return j[key].get<bool>();
}

std::size_t count(const json& j, const char* key, std::size_t dflt) {
  if (!j.contains(key) || j[key].is_null()) return dflt;
  if (!j[key].is_number_unsigned())
    fail(std::string(key) + " must be a non-negative integer");
  return j[key].get<std::size_t>();
}

// Scattering length accepting "<base>_m" or "<base>_a0".
double length_pair(const json& j, const std::string& base, double dflt) {
  const std::string km = base + "_m", ka = base + "_a0";
  const bool hm = j.contains(km) && !j[km].is_null();
  const bool ha = j.contains(ka) && !j[ka].is_null();
  if (hm && ha) fail("give only one of " + km + " / " + ka);
  if (hm) return j[km].get<double>();
  if (ha) return j[ka].get<double>() * kBohrRadius;
  return dflt;
}

std::string compact(double v) {
  char buf[32];
  std::snprintf(buf, sizeof(buf), "%g", v);
  return buf;
}

RunConfig parse_json(const json& j) {
  check_keys(j, "top level",
             {"species", "trap", "beam", "bragg", "focus", "loss", "stepper",
              "grid", "run", "sweep"});
  RunConfig c;

  if (j.contains("species")) {
    const json& s = j["species"];
    check_keys(s, "species",
               {"mass_kg", "gamma_rad_s", "saturation_intensity_w_m2",
                "d2_wavelength_m", "three_body_K_m6_s", "g_m_s2"});
    c.species.mass = num(s, "mass_kg", c.species.mass);
    c.species.gamma = num(s, "gamma_rad_s", c.species.gamma);
    c.species.saturation_intensity =
        num(s, "saturation_intensity_w_m2", c.species.saturation_intensity);
    c.species.d2_wavelength = num(s, "d2_wavelength_m", c.species.d2_wavelength);
    c.species.three_body_K = num(s, "three_body_K_m6_s", c.species.three_body_K);
    c.species.g_accel = num(s, "g_m_s2", c.species.g_accel);
  }

  if (j.contains("trap")) {
    const json& t = j["trap"];
    check_keys(t, "trap",
               {"omega_x_rad_s", "omega_y_rad_s", "omega_z_rad_s",
                "atom_number", "a_s_bec_m", "a_s_bec_a0", "center_z_m"});
    c.trap.omega_x = num(t, "omega_x_rad_s", c.trap.omega_x);
    c.trap.omega_y = num(t, "omega_y_rad_s", c.trap.omega_y);
    c.trap.omega_z = num(t, "omega_z_rad_s", c.trap.omega_z);
    c.trap.atom_number = num(t, "atom_number", c.trap.atom_number);
    c.trap.a_s_bec = length_pair(t, "a_s_bec", c.trap.a_s_bec);
    c.trap_center_z = num(t, "center_z_m", c.trap_center_z);
  }

  if (j.contains("beam")) {
    const json& b = j["beam"];
    check_keys(b, "beam", {"a_s_laser_m", "a_s_laser_a0"});
    c.beam.a_s_laser = length_pair(b, "a_s_laser", c.beam.a_s_laser);
  }

  if (j.contains("bragg")) {
    const json& b = j["bragg"];
    check_keys(b, "bragg",
               {"lambda_m", "alpha_rad", "order", "rabi_rad_s", "delta_z_m"});
    c.bragg.lambda_m = num(b, "lambda_m", c.bragg.lambda_m);
    c.bragg.alpha_rad = num(b, "alpha_rad", c.bragg.alpha_rad);
    c.bragg.order = num(b, "order", c.bragg.order);
    c.bragg.rabi_rad_s = num(b, "rabi_rad_s", c.bragg.rabi_rad_s);
    c.bragg.delta_z_m = num(b, "delta_z_m", c.bragg.delta_z_m);
  }

  if (j.contains("focus") && !j["focus"].is_null()) {
    const json& f = j["focus"];
    check_keys(f, "focus",
               {"detuning_rad_s", "lambda_m", "sigma_z_m", "center_z_m",
                "power_w", "xi"});
    FocusConfig fc;
    fc.detuning_rad_s = num(f, "detuning_rad_s", fc.detuning_rad_s);
    fc.lambda_m = num(f, "lambda_m", fc.lambda_m);
    fc.sigma_z_m = num(f, "sigma_z_m", fc.sigma_z_m);
    fc.center_z_m = num(f, "center_z_m", fc.center_z_m);
    fc.power_w = opt_num(f, "power_w");
    fc.xi = opt_num(f, "xi");
    if (!fc.power_w && !fc.xi) fc.xi = 5.37;
    c.focus = fc;
  }

  if (j.contains("loss")) {
    const json& l = j["loss"];
    check_keys(l, "loss", {"K_m6_s", "convention"});
    c.loss.K = num(l, "K_m6_s", c.loss.K);
    if (l.contains("convention")) {
      const std::string v = l["convention"].get<std::string>();
      if (v == "standard_half_hbar")
        c.loss.convention = LossModel::Convention::standard_half_hbar;
      else if (v == "as_written")
        c.loss.convention = LossModel::Convention::as_written;
      else
        fail("loss.convention must be standard_half_hbar or as_written");
    }
  }

  if (j.contains("stepper")) {
    const json& s = j["stepper"];
    check_keys(s, "stepper",
               {"dt_s", "steps_per_diagnostic", "pump_renormalize",
                "ramp_time_s", "pump_duration_s", "frame_velocity_m_s",
                "absorber_enabled", "absorber_rate_s", "absorber_fraction",
                "absorber_fraction_x", "absorber_fraction_y",
                "absorber_fraction_z"});
    StepperConfig& st = c.stepper;
    st.dt = num(s, "dt_s", st.dt);
    st.steps_per_diagnostic =
        count(s, "steps_per_diagnostic", st.steps_per_diagnostic);
    st.pump_renormalize = flag(s, "pump_renormalize", st.pump_renormalize);
    st.ramp_time_s = num(s, "ramp_time_s", st.ramp_time_s);
    st.pump_duration_s = num(s, "pump_duration_s", st.pump_duration_s);
    st.frame_velocity_m_s = opt_num(s, "frame_velocity_m_s");
    st.absorber_enabled = flag(s, "absorber_enabled", st.absorber_enabled);
    st.absorber_rate = num(s, "absorber_rate_s", st.absorber_rate);
    const double all = num(s, "absorber_fraction", -1.0);
    if (all >= 0)
      st.absorber_fraction_x = st.absorber_fraction_y = st.absorber_fraction_z =
          all;
    st.absorber_fraction_x = num(s, "absorber_fraction_x", st.absorber_fraction_x);
    st.absorber_fraction_y = num(s, "absorber_fraction_y", st.absorber_fraction_y);
    st.absorber_fraction_z = num(s, "absorber_fraction_z", st.absorber_fraction_z);
  }

  if (j.contains("grid")) {
    const json& g = j["grid"];
    check_keys(g, "grid",
               {"dims", "nx", "ny", "nz", "extent_x_m", "extent_y_m",
                "extent_z_m", "min_x_m", "min_y_m", "min_z_m"});
    c.grid.dims = static_cast<int>(count(g, "dims", c.grid.dims));
    c.grid.nx = count(g, "nx", c.grid.nx);
    c.grid.ny = count(g, "ny", c.grid.ny);
    c.grid.nz = count(g, "nz", c.grid.nz);
    c.grid.extent_x_m = num(g, "extent_x_m", c.grid.extent_x_m);
    c.grid.extent_y_m = num(g, "extent_y_m", c.grid.extent_y_m);
    c.grid.extent_z_m = num(g, "extent_z_m", c.grid.extent_z_m);
    c.grid.min_x_m = opt_num(g, "min_x_m", c.grid.min_x_m);
    c.grid.min_y_m = opt_num(g, "min_y_m", c.grid.min_y_m);
    c.grid.min_z_m = num(g, "min_z_m", c.grid.min_z_m);
  }

  if (j.contains("run")) {
    const json& r = j["run"];
    check_keys(r, "run",
               {"max_time_s", "stop_z_m", "slice_z_m", "front_fraction",
                "run_id"});
    c.run.max_time_s = num(r, "max_time_s", c.run.max_time_s);
    c.run.stop_z_m = opt_num(r, "stop_z_m");
    c.run.front_fraction = num(r, "front_fraction", c.run.front_fraction);
    if (r.contains("run_id")) c.run.run_id = r["run_id"].get<std::string>();
    if (r.contains("slice_z_m")) {
      if (!r["slice_z_m"].is_array()) fail("run.slice_z_m must be an array");
      for (const auto& v : r["slice_z_m"])
        c.run.slice_z_m.push_back(v.get<double>());
    }
  }

  c.validate();
  return c;
}

json read_json_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) fail("cannot open " + path);
  std::ostringstream buf;
  buf << in.rdbuf();
  return json::parse(buf.str());
}

} // namespace

SimGrid GridConfig::build() const {
  SimGrid g;
  g.dims = dims;
  g.space = Space::position;
  if (dims == 2) {
    g.n = {nx, nz, 1};
    g.extent = {extent_x_m, extent_z_m, 0};
    g.min = {min_x_m.value_or(-0.5 * extent_x_m), min_z_m, 0};
  } else {
    g.n = {nx, ny, nz};
    g.extent = {extent_x_m, extent_y_m, extent_z_m};
    g.min = {min_x_m.value_or(-0.5 * extent_x_m),
             min_y_m.value_or(-0.5 * extent_y_m), min_z_m};
  }
  g.validate();
  return g;
}

void RunConfig::validate() const {
  species.validate();
  trap.validate();
  beam.validate();
  bragg.validate();
  loss.validate();
  stepper.validate();
  if (focus) focus->validate();
  grid.build();
  if (!(run.max_time_s > 0)) fail("run.max_time_s must be positive");
  if (!(run.front_fraction > 0) || !(run.front_fraction < 1))
    fail("run.front_fraction must lie in (0, 1)");
}

RunConfig parse_config(const std::string& json_text) {
  return parse_json(json::parse(json_text));
}

RunConfig load_config_file(const std::string& path) {
  return parse_json(read_json_file(path));
}

std::vector<std::pair<std::string, RunConfig>> expand_config_file(
    const std::string& path) {
  json j = read_json_file(path);
  json sweep = json::object();
  if (j.contains("sweep")) {
    sweep = j["sweep"];
    if (!sweep.is_object()) fail("sweep must be an object of key -> list");
    j.erase("sweep");
  }

  std::vector<std::pair<std::string, json>> axes; // dotted path -> values
  for (const auto& item : sweep.items()) {
    if (!item.value().is_array() || item.value().empty())
      fail("sweep." + item.key() + " must be a non-empty array");
    axes.emplace_back(item.key(), item.value());
  }

  std::vector<std::pair<std::string, RunConfig>> out;
  std::vector<std::size_t> idx(axes.size(), 0);
  const std::string base_id =
      j.contains("run") && j["run"].contains("run_id")
          ? j["run"]["run_id"].get<std::string>()
          : std::string("run");
  while (true) {
    json combo = j;
    std::string id = base_id;
    for (std::size_t a = 0; a < axes.size(); ++a) {
      std::string ptr = "/" + axes[a].first;
      for (auto& ch : ptr)
        if (ch == '.') ch = '/';
      const json& val = axes[a].second[idx[a]];
      combo[json::json_pointer(ptr)] = val;
      const std::string leaf =
          axes[a].first.substr(axes[a].first.find_last_of('.') + 1);
      id += "_" + leaf + "=" +
            (val.is_number() ? compact(val.get<double>())
                             : val.get<std::string>());
    }
    if (!combo.contains("run")) combo["run"] = json::object();
    combo["run"]["run_id"] = id;
    out.emplace_back(id, parse_json(combo));
    // Next combination (odometer increment).
    std::size_t a = 0;
    for (; a < axes.size(); ++a) {
      if (++idx[a] < axes[a].second.size()) break;
      idx[a] = 0;
    }
    if (a == axes.size()) break;
  }
  return out;
}

} // namespace atomlens
