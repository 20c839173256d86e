#include "mdvo/io.hpp"

#include <charconv>
#include <cmath>
#include <fstream>
#include <stdexcept>

#include "mdvo/config.hpp"

namespace mdvo {

namespace {

void header(std::string& out, const std::vector<std::string>& cols) {
  for (std::size_t i = 0; i < cols.size(); ++i) {
    if (i) out += ',';
    out += cols[i];
  }
  out += '\n';
}

void cell(std::string& out, double v) {
  out += ',';
  out += format_double(v);
}

void write_file(const std::filesystem::path& path, const std::string& content) {
  std::ofstream f(path, std::ios::binary);
  if (!f) throw std::runtime_error("cannot open '" + path.string() + "' for writing");
  f << content;
  if (!f) throw std::runtime_error("write failed for '" + path.string() + "'");
}

nlohmann::json stats_to_json(const RunStats& s) {
  nlohmann::json j;
  j["steps"] = s.steps;
  j["t_end"] = s.t_end;
  j["consensus_error_sup_after_deadline"] = s.consensus_error_sup;
  j["derivative_error_sup_after_deadline"] = s.derivative_error_sup;
  j["label_error_sup_after_deadline"] = s.label_error_sup;
  j["pre_deadline_output_spread"] = s.pre_deadline_spread;
  j["conservation_sup"] = s.conservation_sup;
  j["label_spread_sup"] = s.label_spread_sup;
  j["leader_x_error_mean"] = s.leader_x_error_mean;
  j["follower_x_error_mean"] = s.follower_x_error_mean;
  j["settle_tolerance"] = s.settle_tolerance;
  j["last_unsettled_time"] = s.last_unsettled_time;
  return j;
}

}  // namespace

std::string format_double(double v) {
  if (std::isnan(v)) return "nan";
  if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
  char buf[64];
  const auto res = std::to_chars(buf, buf + sizeof buf, v);
  return std::string(buf, res.ptr);
}

std::string estimates_csv(const SimTrace& trace) {
  std::string out;
  header(out, csv_schema::estimates);
  for (const auto& row : trace.rows) {
    for (std::size_t i = 0; i < row.estimates.size(); ++i) {
      const auto& e = row.estimates[i];
      for (std::size_t mu = 0; mu < e.p_hat.size(); ++mu) {
        out += format_double(row.t);
        out += ',' + std::to_string(i + 1) + ',' + std::to_string(mu);
        for (int a = 0; a < 3; ++a) cell(out, e.p_hat[mu][a]);
        cell(out, e.l_hat);
        out += '\n';
      }
    }
  }
  return out;
}

std::string positions_csv(const SimTrace& trace) {
  std::string out;
  header(out, csv_schema::positions);
  const auto& agents = trace.scenario.agents;
  for (const auto& row : trace.rows) {
    for (std::size_t i = 0; i < row.positions.size(); ++i) {
      out += format_double(row.t);
      out += ',' + std::to_string(i + 1) + ',' + to_string(agents[i].role);
      for (int a = 0; a < 3; ++a) cell(out, row.positions[i][a]);
      out += '\n';
    }
  }
  return out;
}

std::string center_csv(const SimTrace& trace) {
  std::string out;
  header(out, csv_schema::center);
  for (const auto& row : trace.rows) {
    for (std::size_t mu = 0; mu < row.center.size(); ++mu) {
      out += format_double(row.t);
      out += ',' + std::to_string(mu);
      for (int a = 0; a < 3; ++a) cell(out, row.center[mu][a]);
      out += '\n';
    }
  }
  return out;
}

std::string errors_csv(const SimTrace& trace) {
  std::string out;
  auto cols = csv_schema::errors;
  const auto& agents = trace.scenario.agents;
  for (std::size_t i = 0; i < agents.size(); ++i)
    if (agents[i].role == Role::follower) cols.push_back("formation_error_" + std::to_string(i + 1));
  header(out, cols);
  for (const auto& s : error_series(trace)) {
    out += format_double(s.t);
    cell(out, s.consensus);
    cell(out, s.label);
    cell(out, s.formation);
    for (double f : s.follower_formation) cell(out, f);
    out += '\n';
  }
  return out;
}

std::string blocks_csv(const SimTrace& trace) {
  static const char* names[] = {"x", "y", "z", "label"};
  std::string out;
  header(out, csv_schema::blocks);
  const std::size_t n = trace.scenario.agents.size();
  const std::size_t cols = static_cast<std::size_t>(trace.scenario.mdvo.order) + 1;
  for (const auto& row : trace.rows) {
    if (row.block_outputs.size() != 4) throw std::logic_error("blocks_csv: trace has no recorded block outputs");
    for (std::size_t b = 0; b < 4; ++b)
      for (std::size_t i = 0; i < n; ++i)
        for (std::size_t mu = 0; mu < cols; ++mu) {
          out += format_double(row.t);
          out += ',';
          out += names[b];
          out += ',' + std::to_string(i + 1) + ',' + std::to_string(mu);
          cell(out, row.block_outputs[b][i * cols + mu]);
          out += '\n';
        }
  }
  return out;
}

nlohmann::json metadata(const SimTrace& trace, const std::vector<std::string>& files) {
  nlohmann::json j;
  j["format"] = "mdvo-run-metadata/1";
  j["code_version"] = MDVO_VERSION;
  j["scenario"] = trace.scenario.name;
  j["seed"] = trace.scenario.seed;
  j["integrator"] = "explicit-euler";
  j["noise_model"] = "gaussian on leader position only, each sample held for " +
                     std::to_string(trace.scenario.noise_hold_steps) +
                     " step(s); higher derivatives are the noise-free target's";
  j["theta_position"] = trace.theta_position;
  j["theta_label"] = trace.theta_label;
  j["files"] = files;
  j["stats"] = stats_to_json(trace.stats);
  j["resolved_scenario"] = scenario_to_json(trace.scenario);
  return j;
}

std::vector<std::filesystem::path> write_outputs(const SimTrace& trace, const std::filesystem::path& dir,
                                                 const std::string& basename, bool include_blocks) {
  std::filesystem::create_directories(dir);
  std::vector<std::pair<std::string, std::string>> files = {
      {basename + "_estimates.csv", estimates_csv(trace)},
      {basename + "_positions.csv", positions_csv(trace)},
      {basename + "_center.csv", center_csv(trace)},
      {basename + "_errors.csv", errors_csv(trace)},
  };
  if (include_blocks) files.emplace_back(basename + "_blocks.csv", blocks_csv(trace));
  std::vector<std::string> names;
  for (const auto& f : files) names.push_back(f.first);
  files.emplace_back(basename + "_meta.txt", metadata(trace, names).dump(2) + "\n");

  std::vector<std::filesystem::path> written;
  for (const auto& [name, content] : files) {
    write_file(dir / name, content);
    written.push_back(dir / name);
  }
  return written;
}

}  // namespace mdvo
