#include "ccqoe/io.hpp"

#include <charconv>
#include <cmath>
#include <fstream>
#include <set>
#include <sstream>

#include "ccqoe/errors.hpp"
#include "json.hpp"

namespace ccqoe::io {

using nlohmann::json;

std::string format_double(double value) {
  if (std::isnan(value)) return "nan";
  if (std::isinf(value)) return value > 0 ? "inf" : "-inf";
  char buffer[64];
  const auto result = std::to_chars(buffer, buffer + sizeof(buffer), value);
  return std::string(buffer, result.ptr);
}

namespace {

json parse_json(const std::string& text) {
  try {
    return json::parse(text);
  } catch (const json::exception& e) {
    throw ParseError(std::string("not valid JSON: ") + e.what());
  }
}

json load_json(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw ParseError("cannot open " + path.string());
  std::ostringstream buffer;
  buffer << in.rdbuf();
  return parse_json(buffer.str());
}

void reject_unknown_keys(const json& doc, const std::set<std::string>& allowed) {
  if (!doc.is_object()) throw ParseError("top level must be a JSON object");
  for (const auto& [key, value] : doc.items()) {
    (void)value;
    if (!allowed.count(key)) throw ParseError("unknown key: " + key);
  }
}

double require_number(const json& doc, const std::string& key) {
  if (!doc.contains(key)) throw ParseError("missing key: " + key);
  if (!doc[key].is_number()) throw ParseError(key + " must be a number");
  return doc[key].get<double>();
}

int require_int(const json& doc, const std::string& key) {
  if (!doc.contains(key)) throw ParseError("missing key: " + key);
  if (!doc[key].is_number_integer())
    throw ParseError(key + " must be an integer");
  return doc[key].get<int>();
}

Instance instance_from_json(const json& doc) {
  reject_unknown_keys(doc, {"K", "t", "T_lim", "capacities", "channels", "P_T",
                            "N_0", "log_base"});
  const int num_users = require_int(doc, "K");
  const int gain = require_int(doc, "t");
  const double time_budget = require_number(doc, "T_lim");

  const bool has_caps = doc.contains("capacities");
  const bool has_channels = doc.contains("channels");
  if (has_caps == has_channels)
    throw ParseError("exactly one of capacities/channels is required");

  try {
    if (has_caps) {
      for (const char* key : {"P_T", "N_0", "log_base"})
        if (doc.contains(key))
          throw ParseError(std::string(key) + " is only valid with channels");
      if (!doc["capacities"].is_array())
        throw ParseError("capacities must be an array");
      std::vector<double> caps;
      for (const auto& cell : doc["capacities"]) {
        if (!cell.is_number()) throw ParseError("capacities must be numbers");
        caps.push_back(cell.get<double>());
      }
      return Instance::from_capacities(num_users, gain, time_budget,
                                       std::move(caps));
    }

    ChannelSpec spec;
    spec.transmit_power = require_number(doc, "P_T");
    spec.noise_power = require_number(doc, "N_0");
    if (doc.contains("log_base")) spec.log_base = require_number(doc, "log_base");
    if (!doc["channels"].is_array())
      throw ParseError("channels must be an array");
    for (const auto& pair : doc["channels"]) {
      if (!pair.is_array() || pair.size() != 2 || !pair[0].is_number() ||
          !pair[1].is_number())
        throw ParseError("each channel must be a [re, im] pair");
      spec.coefficients.emplace_back(pair[0].get<double>(),
                                     pair[1].get<double>());
    }
    return Instance::from_channels(num_users, gain, time_budget, spec);
  } catch (const std::invalid_argument& e) {
    throw ParseError(e.what());
  }
}

ExperimentConfig config_from_json(const json& doc) {
  reject_unknown_keys(doc, {"K_list", "t_list", "T_lim", "trials", "seed",
                            "solvers", "capacity_mode", "P_T", "N_0",
                            "log_base"});
  ExperimentConfig config;
  for (const char* key : {"K_list", "t_list", "solvers"}) {
    if (!doc.contains(key) || !doc[key].is_array() || doc[key].empty())
      throw ParseError(std::string(key) + " must be a nonempty array");
  }
  for (const auto& cell : doc["K_list"]) {
    if (!cell.is_number_integer()) throw ParseError("K_list must hold integers");
    config.user_counts.push_back(cell.get<int>());
  }
  for (const auto& cell : doc["t_list"]) {
    if (!cell.is_number_integer()) throw ParseError("t_list must hold integers");
    config.gains.push_back(cell.get<int>());
  }
  for (const auto& cell : doc["solvers"]) {
    if (!cell.is_string()) throw ParseError("solvers must hold strings");
    const auto algorithm = algorithm_from_string(cell.get<std::string>());
    if (!algorithm)
      throw ParseError("unknown solver: " + cell.get<std::string>());
    config.solvers.push_back(*algorithm);
  }
  config.time_budget = require_number(doc, "T_lim");
  config.trials = require_int(doc, "trials");
  if (!doc.contains("seed") || !doc["seed"].is_number_unsigned())
    throw ParseError("seed must be a nonnegative integer");
  config.seed = doc["seed"].get<std::uint64_t>();
  if (doc.contains("capacity_mode")) {
    const auto mode = doc["capacity_mode"].get<std::string>();
    if (mode == "channels") config.capacity_mode = CapacityMode::Channels;
    else if (mode == "direct") config.capacity_mode = CapacityMode::Direct;
    else throw ParseError("capacity_mode must be channels or direct");
  }
  if (doc.contains("P_T")) config.transmit_power = require_number(doc, "P_T");
  if (doc.contains("N_0")) config.noise_power = require_number(doc, "N_0");
  if (doc.contains("log_base")) config.log_base = require_number(doc, "log_base");
  if (config.trials < 1) throw ParseError("trials must be >= 1");
  if (!(config.time_budget >= 0)) throw ParseError("T_lim must be >= 0");
  for (int num_users : config.user_counts)
    for (int gain : config.gains)
      if (gain < 1 || gain > num_users - 1)
        throw ParseError("invalid pair K=" + std::to_string(num_users) +
                         ", t=" + std::to_string(gain));
  return config;
}

std::string join_members(const std::vector<int>& members) {
  std::string out;
  for (std::size_t i = 0; i < members.size(); ++i) {
    if (i) out += '-';
    out += std::to_string(members[i]);
  }
  return out;
}

std::string solver_list(const std::vector<Algorithm>& solvers) {
  std::string out;
  for (std::size_t i = 0; i < solvers.size(); ++i) {
    if (i) out += '+';
    out += to_string(solvers[i]);
  }
  return out;
}

std::string cell_or_na(double value) {
  return std::isnan(value) ? "na" : format_double(value);
}

}  // namespace

Instance parse_instance(const std::string& text) {
  return instance_from_json(parse_json(text));
}

Instance load_instance(const std::filesystem::path& path) {
  return instance_from_json(load_json(path));
}

ExperimentConfig parse_config(const std::string& text) {
  return config_from_json(parse_json(text));
}

ExperimentConfig load_config(const std::filesystem::path& path) {
  return config_from_json(load_json(path));
}

void write_solve_csv(std::ostream& out, const SolverReport& report,
                     const std::vector<MulticastGroup>& groups) {
  out << "# ccqoe solve algorithm=" << to_string(report.algorithm) << "\n";
  out << "group_members,j,time_seconds\n";
  for (std::size_t g = 0; g < groups.size(); ++g) {
    const int j = report.schedule.decisions[g];
    out << join_members(groups[g].members) << ',' << j << ','
        << format_double(groups[g].time_ladder[j]) << "\n";
  }
  out << "# qoe_sum=" << report.schedule.qoe_sum
      << " total_time=" << format_double(report.schedule.total_time)
      << " wall_time=" << format_double(report.wall_time) << "\n";
}

void write_sweep_csv(std::ostream& out, Algorithm algorithm, int num_users,
                     const std::vector<SweepPoint>& points) {
  out << "# ccqoe sweep solver=" << to_string(algorithm) << "\n";
  out << "T_lim,qoe_sum";
  for (int k = 1; k <= num_users; ++k) out << ",qoe_user_" << k;
  out << "\n";
  for (const auto& point : points) {
    out << format_double(point.time_budget) << ',' << point.qoe_sum;
    for (int value : point.qoe_per_user) out << ',' << value;
    out << "\n";
  }
}

void write_compare_csv(std::ostream& out, const ExperimentConfig& config,
                       const std::vector<AggregateRow>& rows) {
  out << "# ccqoe compare seed=" << config.seed << " trials=" << config.trials
      << " T_lim=" << format_double(config.time_budget)
      << " capacity_mode="
      << (config.capacity_mode == CapacityMode::Channels ? "channels"
                                                         : "direct")
      << " P_T=" << format_double(config.transmit_power)
      << " N_0=" << format_double(config.noise_power)
      << " log_base=" << format_double(config.log_base)
      << " solvers=" << solver_list(config.solvers) << "\n";
  out << "K,t,trials,mean_qoe_opt,mean_qoe_sdt,mean_qoe_pdt,"
         "gap_sdt_vs_opt_pct,gap_pdt_vs_opt_pct,qoe_impr_pdt_over_sdt_pct,"
         "mean_wall_opt_seconds,mean_wall_sdt_seconds,mean_wall_pdt_seconds,"
         "runtime_sdt_vs_opt_pct,runtime_pdt_vs_opt_pct,"
         "runtime_pdt_over_sdt_ratio\n";
  for (const auto& row : rows) {
    out << row.num_users << ',' << row.gain << ',' << row.trials << ','
        << cell_or_na(row.mean_qoe_opt) << ',' << cell_or_na(row.mean_qoe_sdt)
        << ',' << cell_or_na(row.mean_qoe_pdt) << ','
        << cell_or_na(row.gap_sdt_pct) << ',' << cell_or_na(row.gap_pdt_pct)
        << ',' << cell_or_na(row.impr_pdt_over_sdt_pct) << ','
        << cell_or_na(row.mean_wall_opt) << ',' << cell_or_na(row.mean_wall_sdt)
        << ',' << cell_or_na(row.mean_wall_pdt) << ','
        << cell_or_na(row.runtime_sdt_vs_opt_pct) << ','
        << cell_or_na(row.runtime_pdt_vs_opt_pct) << ','
        << cell_or_na(row.runtime_pdt_over_sdt) << "\n";
  }
}

}  // namespace ccqoe::io
