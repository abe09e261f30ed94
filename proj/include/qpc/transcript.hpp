#pragma once

#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include <nlohmann/json.hpp>

namespace qpc {

enum class AbortCause { DecoyMismatch, StateCheckMismatch, AnnouncementConflict };

std::string_view to_string(AbortCause cause) noexcept;
AbortCause abort_cause_from_string(std::string_view text);

struct Abort {
  int step = 0;
  AbortCause cause = AbortCause::DecoyMismatch;
  std::string detail;

  friend bool operator==(const Abort&, const Abort&) = default;
};

struct TranscriptEvent {
  int step = 0;
  std::string actor;
  std::string kind;
  nlohmann::json payload;
  std::optional<std::string> cause;

  friend bool operator==(const TranscriptEvent&, const TranscriptEvent&) = default;
};

// Ordered record of one protocol run. Events must arrive in non-decreasing
// step order. When recording is disabled only the abort/complete status is
// kept, which is what the Monte Carlo runner needs.
class ProtocolTranscript {
 public:
  static constexpr int kSchemaVersion = 1;

  explicit ProtocolTranscript(std::string protocol = "proposed", bool recording = true);

  bool recording() const noexcept { return recording_; }
  const std::string& protocol() const noexcept { return protocol_; }

  void record(int step, std::string actor, std::string kind, nlohmann::json payload = nlohmann::json::object());

  // Builds the payload only when recording.
  template <class MakePayload>
  void note(int step, std::string actor, std::string kind, MakePayload&& make) {
    if (recording_) record(step, std::move(actor), std::move(kind), make());
  }

  // Marks the run aborted. Only the first abort is kept.
  void abort(int step, AbortCause cause, std::string detail);
  void complete();

  const std::vector<TranscriptEvent>& events() const noexcept { return events_; }
  const std::optional<Abort>& abort_info() const noexcept { return abort_; }
  bool aborted() const noexcept { return abort_.has_value(); }
  bool completed() const noexcept { return completed_; }

  nlohmann::json to_json() const;
  static ProtocolTranscript from_json(const nlohmann::json& doc);

  friend bool operator==(const ProtocolTranscript&, const ProtocolTranscript&) = default;

 private:
  std::string protocol_;
  bool recording_;
  int last_step_ = 0;
  bool completed_ = false;
  std::vector<TranscriptEvent> events_;
  std::optional<Abort> abort_;
};

}  // namespace qpc
