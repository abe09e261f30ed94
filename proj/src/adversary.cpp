#include "qpc/adversary.hpp"

#include <algorithm>
#include <map>
#include <numeric>
#include <set>

#include "qpc/errors.hpp"

namespace qpc {

std::string_view to_string(AdversaryKind kind) noexcept {
  switch (kind) {
    case AdversaryKind::None: return "none";
    case AdversaryKind::EveInterceptResend: return "eve_intercept_resend";
    case AdversaryKind::Tp1FakeInitialState: return "tp1_fake_initial_state";
    case AdversaryKind::Tp1FakeResult: return "tp1_fake_result";
    case AdversaryKind::Tp2FakeResult: return "tp2_fake_result";
    case AdversaryKind::Tp2Intercept: return "tp2_intercept";
    case AdversaryKind::ParticipantInfer: return "participant_infer";
    case AdversaryKind::ClassicalPositionTamper: return "classical_position_tamper";
  }
  return "unknown";
}

AdversaryKind adversary_kind_from_string(std::string_view text) {
  for (auto kind : {AdversaryKind::None, AdversaryKind::EveInterceptResend, AdversaryKind::Tp1FakeInitialState,
                    AdversaryKind::Tp1FakeResult, AdversaryKind::Tp2FakeResult, AdversaryKind::Tp2Intercept,
                    AdversaryKind::ParticipantInfer, AdversaryKind::ClassicalPositionTamper}) {
    if (to_string(kind) == text) return kind;
  }
  throw ConfigError("adversary.kind", "unknown adversary kind '" + std::string(text) + "'");
}

AttackOutcome Adversary::assess(const ProtocolRun& run) const {
  AttackOutcome out;
  if (const auto& abort = run.abort_info()) {
    out.detected = true;
    out.detection_step = abort->step;
  }
  return out;
}

namespace {

// Guesses M_v bit-by-bit from the public C_v and a guess of K_v.
template <class GuessKey>
void score_guesses(const ProtocolRun& run, int victim, GuessKey&& guess_key, std::uint64_t& bits,
                   std::uint64_t& correct) {
  const auto v = static_cast<std::size_t>(victim - 1);
  const auto& positions = run.participant_key_positions[v];
  for (std::size_t b = 0; b < positions.size(); ++b) {
    const int guess = run.comparison[v][b] ^ guess_key(b, positions[b]);
    ++bits;
    if (guess == run.secrets[v][b]) ++correct;
  }
}

// Measures every slot on the tapped links in a uniformly random basis and
// forwards the collapsed photon.
class InterceptResend final : public Adversary {
 public:
  InterceptResend(AdversaryKind kind, std::vector<int> links) : kind_(kind), links_(std::move(links)) {}

  AdversaryKind kind() const noexcept override { return kind_; }

  void attach_taps(QuantumChannel& channel, int participant) override {
    if (std::find(links_.begin(), links_.end(), participant) == links_.end()) return;
    channel.add_tap([this](PhotonSlot& slot, std::vector<QubitRegister>& registers, RandomStream& rng) {
      const Basis basis = rng.bit() ? Basis::X : Basis::Z;
      if (slot.is_decoy()) {
        measure_decoy(slot.decoy_state(), basis, rng);
        return;
      }
      const auto& ref = slot.carrier_ref();
      const int bit = registers[static_cast<std::size_t>(ref.position)].disturb(ref.particle, basis, rng);
      records_[{ref.position, ref.particle}] = Record{basis, bit};
    });
  }

  AttackOutcome assess(const ProtocolRun& run) const override {
    auto out = Adversary::assess(run);
    if (!run.completed()) return out;
    for (int v : links_) {
      score_guesses(
          run, v,
          [&](std::size_t, int position) {
            const auto it = records_.find({position, v});
            return it == records_.end() ? 0 : it->second.bit;
          },
          out.guess_bits, out.guess_correct);
    }
    return out;
  }

 private:
  struct Record {
    Basis basis;
    int bit;
  };
  AdversaryKind kind_;
  std::vector<int> links_;
  std::map<std::pair<int, int>, Record> records_;
};

// TP1 hands out a different state than the one it reports to TP2, then tries
// to read every secret from C_i using whatever key bits it can predict.
class FakeInitialState final : public Adversary {
 public:
  FakeInitialState(int n, std::optional<std::uint64_t> true_index, std::uint64_t claimed_index)
      : n_(n), true_index_(true_index), claimed_(ghz_from_index(claimed_index, n)) {}

  AdversaryKind kind() const noexcept override { return AdversaryKind::Tp1FakeInitialState; }

  void on_prepare(std::vector<QubitRegister>& registers, std::vector<GhzSpec>& claimed, RandomStream&) override {
    predicted_.assign(registers.size(), std::vector<std::optional<int>>(static_cast<std::size_t>(n_)));
    for (std::size_t r = 0; r < registers.size(); ++r) {
      registers[r] = true_index_ ? QubitRegister::ghz(ghz_from_index(*true_index_, n_))
                                 : QubitRegister::product(std::vector<Eigenstate>(static_cast<std::size_t>(n_),
                                                                                  Eigenstate::Zero));
      claimed[r] = claimed_;
      for (int k = 1; k <= n_; ++k) predicted_[r][static_cast<std::size_t>(k - 1)] = registers[r].predict(k, Basis::Z);
    }
  }

  AttackOutcome assess(const ProtocolRun& run) const override {
    auto out = Adversary::assess(run);
    if (!run.completed()) return out;
    for (int v = 1; v <= run.n; ++v) {
      score_guesses(
          run, v,
          [&](std::size_t, int position) {
            const auto& p = predicted_[static_cast<std::size_t>(position)][static_cast<std::size_t>(v - 1)];
            return p.value_or(0);
          },
          out.guess_bits, out.guess_correct);
    }
    return out;
  }

 private:
  int n_;
  std::optional<std::uint64_t> true_index_;
  GhzSpec claimed_;
  std::vector<std::vector<std::optional<int>>> predicted_;
};

class FakeResult final : public Adversary {
 public:
  FakeResult(AdversaryKind kind, std::vector<std::pair<int, int>> pairs) : kind_(kind), pairs_(std::move(pairs)) {}

  AdversaryKind kind() const noexcept override { return kind_; }

  void on_announce(const PartyId& tp, Announcement& announcement) override {
    const auto liar = kind_ == AdversaryKind::Tp1FakeResult ? PartyId::tp1() : PartyId::tp2();
    if (!(tp == liar)) return;
    const bool selected = pairs_.empty() || std::find(pairs_.begin(), pairs_.end(),
                                                      std::pair{announcement.i, announcement.j}) != pairs_.end();
    if (selected) flip(announcement);
  }

 private:
  AdversaryKind kind_;
  std::vector<std::pair<int, int>> pairs_;
};

// Honest participant guessing a victim's key from its own outcomes. Scores
// both the blind guess (assume T_av = 0) and the counterfactual guess that
// knows the initial states (K_v = K_a xor T_av).
class ParticipantInfer final : public Adversary {
 public:
  ParticipantInfer(int attacker, int victim) : attacker_(attacker), victim_(victim) {}

  AdversaryKind kind() const noexcept override { return AdversaryKind::ParticipantInfer; }

  AttackOutcome assess(const ProtocolRun& run) const override {
    auto out = Adversary::assess(run);
    if (!run.completed()) return out;
    const auto& own_key = run.keys[static_cast<std::size_t>(attacker_ - 1)];
    score_guesses(
        run, victim_, [&](std::size_t b, int) { return static_cast<int>(own_key[b]); }, out.guess_bits,
        out.guess_correct);
    score_guesses(
        run, victim_,
        [&](std::size_t b, int position) {
          return own_key[b] ^ t_xor(run.claimed[static_cast<std::size_t>(position)], attacker_, victim_);
        },
        out.counterfactual_bits, out.counterfactual_correct);
    return out;
  }

 private:
  int attacker_;
  int victim_;
};

// Rewrites P1's broadcast check positions so participants 2..n measure other
// registers. Each tampered entry moves to a distinct register outside the
// announced set.
class PositionTamper final : public Adversary {
 public:
  explicit PositionTamper(std::optional<int> count) : count_(count) {}

  AdversaryKind kind() const noexcept override { return AdversaryKind::ClassicalPositionTamper; }

  void on_position_broadcast(std::vector<int>& positions, int register_count, RandomStream& rng) override {
    const auto l = static_cast<std::size_t>(count_.value_or(static_cast<int>(positions.size())));
    if (l > positions.size()) throw ContractError("more tampered checks than check rounds");

    std::vector<std::size_t> entries(positions.size());
    std::iota(entries.begin(), entries.end(), std::size_t{0});
    std::vector<std::size_t> chosen;
    std::sample(entries.begin(), entries.end(), std::back_inserter(chosen), l, rng.engine());

    const std::set<int> announced(positions.begin(), positions.end());
    std::vector<int> outside;
    for (int p = 0; p < register_count; ++p) {
      if (!announced.count(p)) outside.push_back(p);
    }
    if (outside.size() < l) throw ContractError("not enough unchecked registers to redirect tampered checks");
    std::vector<int> targets;
    std::sample(outside.begin(), outside.end(), std::back_inserter(targets), l, rng.engine());
    std::shuffle(targets.begin(), targets.end(), rng.engine());
    for (std::size_t t = 0; t < l; ++t) positions[chosen[t]] = targets[t];
  }

 private:
  std::optional<int> count_;
};

void check_participant(const std::string& field, int k, int n) {
  if (k < 1 || k > n) {
    throw ConfigError(field, "participant index " + std::to_string(k) + " outside 1.." + std::to_string(n));
  }
}

void check_index(const std::string& field, std::uint64_t index, int n) {
  if (index < 1 || index > family_size(n)) {
    throw ConfigError(field, "GHZ index " + std::to_string(index) + " outside 1.." + std::to_string(family_size(n)));
  }
}

}  // namespace

void validate(const AdversaryConfig& config, int n) {
  switch (config.kind) {
    case AdversaryKind::EveInterceptResend:
    case AdversaryKind::Tp2Intercept: {
      if (config.links.empty()) throw ConfigError("adversary.params.links", "at least one link is required");
      std::set<int> seen;
      for (int k : config.links) {
        check_participant("adversary.params.links", k, n);
        if (!seen.insert(k).second) throw ConfigError("adversary.params.links", "duplicate link");
      }
      break;
    }
    case AdversaryKind::Tp1FakeInitialState:
      check_index("adversary.params.claimed_index", config.claimed_index, n);
      if (config.true_state_index) check_index("adversary.params.true_state", *config.true_state_index, n);
      break;
    case AdversaryKind::Tp1FakeResult:
    case AdversaryKind::Tp2FakeResult:
      for (const auto& [i, j] : config.pairs) {
        check_participant("adversary.params.pairs", i, n);
        check_participant("adversary.params.pairs", j, n);
        if (i >= j) throw ConfigError("adversary.params.pairs", "pairs must be written as [i, j] with i < j");
      }
      break;
    case AdversaryKind::ParticipantInfer:
      check_participant("adversary.params.attacker", config.attacker, n);
      check_participant("adversary.params.victim", config.victim, n);
      break;
    case AdversaryKind::ClassicalPositionTamper:
      if (config.tampered_checks && *config.tampered_checks < 1) {
        throw ConfigError("adversary.params.tampered_checks", "must be at least 1");
      }
      break;
    case AdversaryKind::None: break;
  }
}

std::unique_ptr<Adversary> make_adversary(const AdversaryConfig& config, int n) {
  validate(config, n);
  switch (config.kind) {
    case AdversaryKind::None: return std::make_unique<NoAdversary>();
    case AdversaryKind::EveInterceptResend:
    case AdversaryKind::Tp2Intercept: return std::make_unique<InterceptResend>(config.kind, config.links);
    case AdversaryKind::Tp1FakeInitialState:
      return std::make_unique<FakeInitialState>(n, config.true_state_index, config.claimed_index);
    case AdversaryKind::Tp1FakeResult:
    case AdversaryKind::Tp2FakeResult: return std::make_unique<FakeResult>(config.kind, config.pairs);
    case AdversaryKind::ParticipantInfer: return std::make_unique<ParticipantInfer>(config.attacker, config.victim);
    case AdversaryKind::ClassicalPositionTamper: return std::make_unique<PositionTamper>(config.tampered_checks);
  }
  throw ConfigError("adversary.kind", "unsupported adversary kind");
}

}  // namespace qpc
