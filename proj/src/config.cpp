#include "navexplain/config.hpp"

#include <charconv>
#include <cmath>
#include <sstream>
#include <stdexcept>

namespace navexplain {

namespace {

std::string trim(std::string_view s) {
  const auto first = s.find_first_not_of(" \t\r");
  if (first == std::string_view::npos) return {};
  const auto last = s.find_last_not_of(" \t\r");
  return std::string(s.substr(first, last - first + 1));
}

std::vector<std::string> split_list(const std::string& value) {
  std::vector<std::string> out;
  std::string item;
  std::istringstream in(value);
  while (std::getline(in, item, ',')) {
    auto t = trim(item);
    if (!t.empty()) out.push_back(t);
  }
  return out;
}

double to_double(const std::string& v, std::size_t line) {
  std::size_t used = 0;
  double d = 0.0;
  try {
    d = std::stod(v, &used);
  } catch (const std::exception&) {
    used = 0;
  }
  if (used != v.size() || !std::isfinite(d)) {
    throw std::invalid_argument("config line " + std::to_string(line) + ": bad number '" + v + "'");
  }
  return d;
}

std::vector<double> to_doubles(const std::string& v, std::size_t line) {
  std::vector<double> out;
  for (const auto& item : split_list(v)) out.push_back(to_double(item, line));
  return out;
}

}  // namespace

NavConfig load_config(std::string_view text, NavConfig cfg) {
  std::istringstream in{std::string(text)};
  std::string raw;
  std::size_t line = 0;
  while (std::getline(in, raw)) {
    ++line;
    if (auto hash = raw.find('#'); hash != std::string::npos) raw.resize(hash);
    const std::string stripped = trim(raw);
    if (stripped.empty()) continue;
    const auto eq = stripped.find('=');
    if (eq == std::string::npos) {
      throw std::invalid_argument("config line " + std::to_string(line) + ": expected key = value");
    }
    const std::string key = trim(stripped.substr(0, eq));
    const std::string value = trim(stripped.substr(eq + 1));

    if (key == "beam_count") {
      cfg.sensor.beam_count = static_cast<std::size_t>(to_double(value, line));
    } else if (key == "fov_deg") {
      cfg.sensor.fov = to_double(value, line) * kPi / 180.0;
    } else if (key == "max_range") {
      cfg.sensor.max_range = to_double(value, line);
    } else if (key == "moves") {
      cfg.actions.moves = to_doubles(value, line);
    } else if (key == "turns") {
      cfg.actions.turns = to_doubles(value, line);
    } else if (key == "advisors") {
      cfg.advisors.clear();
      for (const auto& name : split_list(value)) {
        const AdvisorId id = parse_advisor(name);
        if (advisor_tier(id) != 3) {
          throw std::invalid_argument("config line " + std::to_string(line) +
                                      ": only tier-3 advisors are configurable");
        }
        cfg.advisors.push_back(id);
      }
    } else if (key == "epsilon_wall") {
      cfg.epsilon_wall = to_double(value, line);
    } else if (key == "safety_margin") {
      cfg.safety_margin = to_double(value, line);
    } else if (key == "not_opposite_tolerance") {
      cfg.not_opposite_tolerance = to_double(value, line);
    } else if (key == "arrival_radius") {
      cfg.arrival_radius = to_double(value, line);
    } else if (key == "cycle_cap") {
      cfg.cycle_cap = static_cast<int>(to_double(value, line));
    } else if (key == "conveyor_cell_size") {
      cfg.conveyor_cell_size = to_double(value, line);
    } else if (key == "door_arc_length") {
      cfg.door_arc_length = to_double(value, line);
    } else if (key == "turn_lookahead") {
      cfg.turn_lookahead = to_double(value, line);
    } else {
      throw std::invalid_argument("config line " + std::to_string(line) + ": unknown key '" +
                                  key + "'");
    }
  }
  if (cfg.actions.moves.empty() || cfg.actions.turns.empty()) {
    throw std::invalid_argument("config: move and turn sets must be nonempty");
  }
  if (cfg.advisors.empty()) throw std::invalid_argument("config: no tier-3 advisors");
  return cfg;
}

NavConfig load_config_file(const std::string& path, NavConfig base) {
  return load_config(read_text_file(path), std::move(base));
}

std::string format_config(const NavConfig& cfg) {
  std::ostringstream out;
  // Shortest text that parses back to the same double.
  auto num = [](double v) {
    char buf[32];
    const auto r = std::to_chars(buf, buf + sizeof buf, v);
    return std::string(buf, r.ptr);
  };
  auto list = [&](const std::vector<double>& v) {
    for (std::size_t i = 0; i < v.size(); ++i) out << (i ? ", " : "") << num(v[i]);
  };
  out << "beam_count = " << cfg.sensor.beam_count << '\n';
  out << "fov_deg = " << num(cfg.sensor.fov * 180.0 / kPi) << '\n';
  out << "max_range = " << num(cfg.sensor.max_range) << '\n';
  out << "moves = ";
  list(cfg.actions.moves);
  out << "\nturns = ";
  list(cfg.actions.turns);
  out << "\nadvisors = ";
  for (std::size_t i = 0; i < cfg.advisors.size(); ++i) {
    out << (i ? ", " : "") << to_string(cfg.advisors[i]);
  }
  out << "\nepsilon_wall = " << num(cfg.epsilon_wall) << '\n';
  out << "safety_margin = " << num(cfg.safety_margin) << '\n';
  out << "not_opposite_tolerance = " << num(cfg.not_opposite_tolerance) << '\n';
  out << "arrival_radius = " << num(cfg.arrival_radius) << '\n';
  out << "cycle_cap = " << cfg.cycle_cap << '\n';
  out << "conveyor_cell_size = " << num(cfg.conveyor_cell_size) << '\n';
  out << "door_arc_length = " << num(cfg.door_arc_length) << '\n';
  out << "turn_lookahead = " << num(cfg.turn_lookahead) << '\n';
  return out.str();
}

}  // namespace navexplain
