#include "faithdebate/runlog.hpp"

#include <ctime>
#include <filesystem>
#include <iostream>

#include "faithdebate/errors.hpp"

namespace faithdebate {

namespace fs = std::filesystem;

std::string utc_timestamp() {
  std::time_t now = std::time(nullptr);
  std::tm tm_utc{};
  gmtime_r(&now, &tm_utc);
  char buf[32];
  std::strftime(buf, sizeof(buf), "%Y-%m-%dT%H:%M:%SZ", &tm_utc);
  return buf;
}

RunLog::RunLog(std::string runs_dir, std::string run_id,
               const nlohmann::ordered_json& config_snapshot)
    : runs_dir_(std::move(runs_dir)), run_id_(std::move(run_id)) {
  fs::path dir = fs::path(runs_dir_) / run_id_;
  std::error_code ec;
  fs::create_directories(dir, ec);
  if (ec) {
    raise(ErrorCode::IoError,
          "cannot create run directory " + dir.string() + ": " + ec.message());
  }
  {
    std::ofstream cfg(dir / "config", std::ios::trunc);
    if (!cfg) {
      raise(ErrorCode::IoError,
            "cannot write config snapshot under " + dir.string());
    }
    cfg << config_snapshot.dump(2) << '\n';
  }
  out_.open(dir / "log", std::ios::app);
  if (!out_) {
    raise(ErrorCode::IoError, "cannot open run log under " + dir.string());
  }
}

std::string RunLog::run_dir() const {
  return (fs::path(runs_dir_) / run_id_).string();
}

void RunLog::append(const std::string& record_id, const std::string& component,
                    nlohmann::ordered_json payload) {
  nlohmann::ordered_json entry;
  entry["run_id"] = run_id_;
  entry["timestamp"] = utc_timestamp();
  entry["record_id"] = record_id;
  entry["component"] = component;
  entry["payload"] = std::move(payload);
  std::string line = entry.dump();

  std::lock_guard<std::mutex> lock(mutex_);
  out_ << line << '\n';
  out_.flush();
  if (!out_) {
    raise(ErrorCode::IoError, "run log write failed for run " + run_id_);
  }
}

std::vector<RunLogEntry> replay_runlog(const std::string& runs_dir,
                                       const std::string& run_id) {
  std::vector<RunLogEntry> entries;
  fs::path log_path = fs::path(runs_dir) / run_id / "log";
  std::ifstream in(log_path);
  if (!in) {
    std::cerr << "warning: no run log found for run id '" << run_id
              << "' under " << runs_dir << "\n";
    return entries;
  }
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (line.empty()) continue;
    nlohmann::ordered_json j = nlohmann::ordered_json::parse(line, nullptr,
                                                             false);
    if (j.is_discarded()) {
      raise(ErrorCode::SchemaError, "corrupt run log entry at " +
                                        log_path.string() + ":" +
                                        std::to_string(line_no));
    }
    RunLogEntry e;
    e.run_id = j.value("run_id", "");
    e.timestamp = j.value("timestamp", "");
    e.record_id = j.value("record_id", "");
    e.component = j.value("component", "");
    if (j.contains("payload")) e.payload = j["payload"];
    entries.push_back(std::move(e));
  }
  return entries;
}

}  // namespace faithdebate
