#include "qscl/scenario.hpp"

#include <algorithm>
#include <charconv>
#include <set>
#include <sstream>

namespace qscl {
namespace {

std::string_view trim(std::string_view s) {
  const auto b = s.find_first_not_of(" \t\r");
  if (b == std::string_view::npos) return {};
  const auto e = s.find_last_not_of(" \t\r");
  return s.substr(b, e - b + 1);
}

[[noreturn]] void fail(std::size_t line, const std::string& what) {
  throw Error(Errc::Scenario, "line " + std::to_string(line) + ": " + what);
}

template <class T>
T parse_uint(std::string_view s, std::size_t line, const char* what) {
  T v{};
  const auto [p, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
  if (ec != std::errc() || p != s.data() + s.size()) fail(line, std::string("invalid ") + what + " '" + std::string(s) + "'");
  return v;
}

std::vector<std::string> split_list(std::string_view s) {
  std::vector<std::string> out;
  std::size_t start = 0;
  while (start <= s.size()) {
    const auto comma = s.find(',', start);
    const auto item = trim(s.substr(start, comma == std::string_view::npos ? std::string_view::npos : comma - start));
    if (!item.empty()) out.emplace_back(item);
    if (comma == std::string_view::npos) break;
    start = comma + 1;
  }
  return out;
}

StepAction parse_action(std::string_view s, std::size_t line) {
  if (s == "register") return StepAction::Register;
  if (s == "rekey") return StepAction::Rekey;
  if (s == "beacon") return StepAction::Beacon;
  if (s == "tamper") return StepAction::Tamper;
  if (s == "replay") return StepAction::Replay;
  if (s == "forge") return StepAction::Forge;
  fail(line, "unknown action '" + std::string(s) + "'");
}

ScenarioStep parse_step(std::string_view value, std::size_t line) {
  std::istringstream in{std::string(value)};
  std::string time, action, actor, opt;
  if (!(in >> time >> action >> actor)) fail(line, "step needs '<time> <action> <vehicle>'");
  ScenarioStep step;
  step.at = parse_uint<Timestamp>(time, line, "time");
  step.action = parse_action(action, line);
  step.actor = actor;
  while (in >> opt) {
    const auto eq = opt.find('=');
    if (eq == std::string::npos) fail(line, "step option must be key=value");
    const std::string_view key(opt.data(), eq);
    const std::string_view val(opt.data() + eq + 1, opt.size() - eq - 1);
    if (key == "count") step.count = parse_uint<std::uint32_t>(val, line, "count");
    else if (key == "payload") step.payload_len = parse_uint<std::size_t>(val, line, "payload");
    else fail(line, "unknown step option '" + std::string(key) + "'");
  }
  return step;
}

}  // namespace

std::string_view to_string(StepAction a) {
  switch (a) {
    case StepAction::Register: return "register";
    case StepAction::Rekey: return "rekey";
    case StepAction::Beacon: return "beacon";
    case StepAction::Tamper: return "tamper";
    case StepAction::Replay: return "replay";
    case StepAction::Forge: return "forge";
  }
  return "?";
}

ScenarioConfig ScenarioConfig::parse(std::string_view text) {
  ScenarioConfig cfg;
  std::size_t line_no = 0;
  std::size_t pos = 0;
  while (pos <= text.size()) {
    const auto nl = text.find('\n', pos);
    auto line = text.substr(pos, nl == std::string_view::npos ? std::string_view::npos : nl - pos);
    pos = nl == std::string_view::npos ? text.size() + 1 : nl + 1;
    ++line_no;
    if (const auto hash = line.find('#'); hash != std::string_view::npos) line = line.substr(0, hash);
    line = trim(line);
    if (line.empty()) continue;

    const auto eq = line.find('=');
    if (eq == std::string_view::npos) fail(line_no, "expected 'key = value'");
    const auto key = trim(line.substr(0, eq));
    const auto value = trim(line.substr(eq + 1));

    if (key == "profile") {
      const auto p = parse_profile(value);
      if (!p) fail(line_no, "unknown profile '" + std::string(value) + "'");
      cfg.profile = *p;
    } else if (key == "max_age") {
      cfg.policy.max_age = parse_uint<std::uint32_t>(value, line_no, "max_age");
    } else if (key == "replay_window") {
      cfg.policy.replay_window = parse_uint<std::size_t>(value, line_no, "replay_window");
    } else if (key == "drop_probability") {
      try {
        std::size_t used = 0;
        cfg.drop_probability = std::stod(std::string(value), &used);
        if (used != value.size()) throw std::invalid_argument("trailing");
      } catch (const std::exception&) {
        fail(line_no, "invalid drop_probability");
      }
    } else if (key == "vehicles") {
      for (auto& v : split_list(value)) cfg.vehicles.push_back(std::move(v));
    } else if (key == "rsus") {
      for (auto& r : split_list(value)) cfg.rsus.push_back(std::move(r));
    } else if (key == "step") {
      cfg.steps.push_back(parse_step(value, line_no));
    } else {
      fail(line_no, "unknown key '" + std::string(key) + "'");
    }
  }
  cfg.validate();
  return cfg;
}

void ScenarioConfig::validate() const {
  auto err = [](const std::string& what) { throw Error(Errc::Scenario, what); };
  if (policy.max_age == 0) err("max_age must be positive");
  if (!(drop_probability >= 0.0 && drop_probability <= 1.0)) err("drop_probability must lie in [0, 1]");
  if (rsus.empty()) err("at least one RSU is required");

  std::set<std::string> names;
  for (const auto& v : vehicles) {
    if (!names.insert(v).second) err("duplicate actor name '" + v + "'");
  }
  for (const auto& r : rsus) {
    if (!names.insert(r).second) err("duplicate actor name '" + r + "'");
  }

  Timestamp last = 0;
  for (const auto& s : steps) {
    if (std::find(vehicles.begin(), vehicles.end(), s.actor) == vehicles.end()) {
      err("step references undeclared vehicle '" + s.actor + "'");
    }
    if (s.at < last) err("step times must not decrease");
    last = s.at;
    if (s.payload_len > 0xFFFF) err("payload longer than 65535 bytes");
    if (s.action == StepAction::Tamper && s.payload_len == 0) err("tamper needs a nonempty payload");
  }
}

}  // namespace qscl
