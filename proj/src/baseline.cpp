#include <algorithm>
#include <numeric>

#include "qpc/adversary.hpp"
#include "qpc/errors.hpp"
#include "qpc/photon.hpp"
#include "qpc/protocol.hpp"

namespace qpc {

namespace {

// |phi+> = (|00> + |11>)/sqrt2 and |psi-> = (|01> - |10>)/sqrt2 in the
// canonical indexing.
constexpr std::uint64_t kPhiPlus = 1;
constexpr std::uint64_t kPsiMinus = 4;

}  // namespace

ProtocolRun run_zhang_baseline(const BaselineParams& params, const std::vector<Bits>& secrets, Adversary& adversary,
                               RandomStream& rng) {
  if (secrets.size() != 2) throw ContractError("the baseline compares exactly two participants");
  if (params.m < 1) throw ContractError("m must be at least 1");
  if (params.check_rounds < 0) throw ContractError("check_rounds must be non-negative");
  if (params.decoy_count < 0 || params.decoy_tolerance < 0) throw ContractError("decoy settings must be non-negative");
  for (const auto& s : secrets) {
    if (s.size() != static_cast<std::size_t>(params.m)) throw ContractError("every secret must have m bits");
  }

  const int m = params.m;
  const int total = m + params.check_rounds;

  ProtocolRun run;
  run.transcript = ProtocolTranscript("zhang_baseline", params.record_events);
  run.n = 2;
  run.m = m;
  run.secrets = secrets;
  auto& log = run.transcript;

  // Step 1: EPR pairs drawn from {|phi+>, |psi->}.
  for (int r = 0; r < total; ++r) run.prepared.push_back(ghz_from_index(rng.bit() ? kPsiMinus : kPhiPlus, 2));
  std::vector<QubitRegister> registers;
  for (const auto& spec : run.prepared) registers.push_back(QubitRegister::ghz(spec));
  std::vector<GhzSpec> claimed = run.prepared;
  adversary.on_prepare(registers, claimed, rng);
  log.note(1, "TP1", "prepare", [&] { return nlohmann::json{{"pairs", total}}; });

  // Step 2: decoys inserted, sequences sent to Alice and Bob.
  struct Link {
    Interleaved merged;
    std::vector<DecoyState> decoys;
  };
  std::vector<Link> links;
  for (int k = 1; k <= 2; ++k) {
    std::vector<PhotonSlot> carriers;
    for (int r = 0; r < total; ++r) carriers.push_back(PhotonSlot::carrier(r, k));
    Link link;
    link.decoys = generate_decoys(static_cast<std::size_t>(params.decoy_count), rng);
    link.merged = interleave(carriers, link.decoys, rng);
    QuantumChannel channel(PartyId::tp1(), PartyId::participant(k));
    adversary.attach_taps(channel, k);
    channel.transmit(link.merged.sequence, registers, rng);
    log.note(2, "TP1", "transmit", [&] {
      return nlohmann::json{{"to", PartyId::participant(k).name()}, {"length", link.merged.sequence.size()}};
    });
    links.push_back(std::move(link));
  }

  // Step 3: public discussion on each link.
  for (int k = 1; k <= 2; ++k) {
    auto& link = links[static_cast<std::size_t>(k - 1)];
    std::vector<DecoyAnnouncement> announcements;
    std::vector<int> results;
    for (std::size_t d = 0; d < link.decoys.size(); ++d) {
      const auto pos = link.merged.decoy_positions[d];
      const Basis basis = basis_of(link.decoys[d]);
      announcements.push_back({pos, basis});
      results.push_back(measure_decoy(link.merged.sequence[pos].decoy_state(), basis, rng));
    }
    const auto report = public_discussion(announcements, results, link.decoys,
                                          static_cast<std::size_t>(params.decoy_tolerance));
    log.note(3, "TP1", "decoy_check", [&] {
      return nlohmann::json{{"participant", PartyId::participant(k).name()},
                            {"mismatches", report.mismatches},
                            {"passed", report.passed}};
    });
    if (!report.passed) {
      log.abort(3, AbortCause::DecoyMismatch,
                std::to_string(report.mismatches) + " decoy mismatches on link TP1->P" + std::to_string(k));
      run.attack = adversary.assess(run);
      return run;
    }
  }
  run.claimed = claimed;

  // Step 4: state check over the participant-to-participant authenticated
  // channel: Alice picks positions, Bob picks bases, TP verifies.
  std::vector<int> all(static_cast<std::size_t>(total));
  std::iota(all.begin(), all.end(), 0);
  std::vector<int> checked;
  std::sample(all.begin(), all.end(), std::back_inserter(checked), params.check_rounds, rng.engine());
  std::vector<Basis> bases(checked.size());
  for (auto& b : bases) b = rng.bit() ? Basis::X : Basis::Z;
  std::vector<Outcome> outcomes;
  for (std::size_t r = 0; r < checked.size(); ++r) {
    outcomes.push_back(registers[static_cast<std::size_t>(checked[r])].measure(all_particles(2), bases[r], rng));
  }
  const auto check = step3_check(checked, bases, outcomes, claimed);
  run.checked_positions = checked;
  run.checks = check.registers;
  log.note(4, "TP1", "state_check", [&] {
    return nlohmann::json{{"positions", checked}, {"passed", check.passed}, {"channel", "participant_authenticated"}};
  });
  if (!check.passed) {
    log.abort(4, AbortCause::StateCheckMismatch, "checked EPR pairs inconsistent with the initial states");
    run.attack = adversary.assess(run);
    return run;
  }

  // Step 5: Z measurements give K_A and K_B.
  std::vector<char> is_checked(static_cast<std::size_t>(total), 0);
  for (int p : checked) is_checked[static_cast<std::size_t>(p)] = 1;
  for (int p = 0; p < total && static_cast<int>(run.key_positions.size()) < m; ++p) {
    if (!is_checked[static_cast<std::size_t>(p)]) run.key_positions.push_back(p);
  }
  run.participant_key_positions = {run.key_positions, run.key_positions};
  for (int k = 1; k <= 2; ++k) {
    Bits key(static_cast<std::size_t>(m));
    for (int b = 0; b < m; ++b) {
      const auto o = registers[static_cast<std::size_t>(run.key_positions[static_cast<std::size_t>(b)])].measure(
          ParticleSet{1} << (k - 1), Basis::Z, rng);
      key[static_cast<std::size_t>(b)] = static_cast<std::uint8_t>(o.bit(k));
    }
    run.keys.push_back(std::move(key));
  }

  // Step 6: C_A, C_B and their XOR C, sent to TP.
  run.comparison = {xor_bits(run.keys[0], secrets[0]), xor_bits(run.keys[1], secrets[1])};
  const Bits combined = xor_bits(run.comparison[0], run.comparison[1]);
  log.note(6, "P1", "comparison_info", [&] { return nlohmann::json{{"to", "TP1"}, {"c", to_string(combined)}}; });

  // Step 7: R = C_T xor C; the single TP's announcement is final.
  PairResult pr;
  pr.truth = xor_bits(secrets[0], secrets[1]);
  pr.r_tp1 = xor_bits(pair_pad(claimed, run.key_positions, 1, 2, params.fault), combined);
  pr.tp1 = make_announcement(PartyId::tp1(), 1, 2, pr.r_tp1, false);
  adversary.on_announce(PartyId::tp1(), pr.tp1);
  log.note(7, "TP1", "announcement", [&] {
    return nlohmann::json{{"pair", {1, 2}}, {"verdict", std::string(to_string(pr.tp1.verdict))}};
  });
  run.pairs.push_back(std::move(pr));
  log.complete();
  run.attack = adversary.assess(run);
  return run;
}

ProtocolRun run_zhang_baseline(const BaselineParams& params, const std::vector<Bits>& secrets, RandomStream& rng) {
  NoAdversary none;
  return run_zhang_baseline(params, secrets, none, rng);
}

}  // namespace qpc
