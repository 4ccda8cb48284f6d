#ifndef FAITHDEBATE_RUNLOG_HPP
#define FAITHDEBATE_RUNLOG_HPP

#include <fstream>
#include <mutex>
#include <string>
#include <vector>

#include "json.hpp"

namespace faithdebate {

// One structured entry in a run's append-only log. Entries are
// self-describing: payload carries prompts, raw responses, parsed results,
// seeds or config snapshots as produced by each component.
struct RunLogEntry {
  std::string run_id;
  std::string timestamp;  // ISO-8601 UTC
  std::string record_id;
  std::string component;
  nlohmann::ordered_json payload;
};

// Append-only, crash-safe log for one run. Layout on disk:
//   <runs_dir>/<run_id>/log      newline-delimited JSON entries
//   <runs_dir>/<run_id>/config   config snapshot written at open time
// Appends are serialized through one writer and flushed per entry, so
// concurrent sessions never interleave bytes within an entry.
class RunLog {
 public:
  RunLog(std::string runs_dir, std::string run_id,
         const nlohmann::ordered_json& config_snapshot);

  void append(const std::string& record_id, const std::string& component,
              nlohmann::ordered_json payload);

  const std::string& run_id() const { return run_id_; }
  std::string run_dir() const;

 private:
  std::string runs_dir_;
  std::string run_id_;
  std::mutex mutex_;
  std::ofstream out_;
};

// Entries in write order; unknown run ids yield an empty list and a warning
// on stderr rather than an error.
std::vector<RunLogEntry> replay_runlog(const std::string& runs_dir,
                                       const std::string& run_id);

std::string utc_timestamp();

}  // namespace faithdebate

#endif  // FAITHDEBATE_RUNLOG_HPP
