#include "qpc/protocol.hpp"

#include <algorithm>
#include <bit>
#include <numeric>
#include <set>

#include "qpc/adversary.hpp"
#include "qpc/errors.hpp"
#include "qpc/photon.hpp"

namespace qpc {

std::string_view to_string(Variant v) noexcept {
  return v == Variant::ClassicalBroadcast ? "classical_broadcast" : "tp2_relay";
}

std::string_view to_string(Verdict v) noexcept { return v == Verdict::Identical ? "identical" : "different"; }

std::string_view to_string(CrossCheck c) noexcept { return c == CrossCheck::Accepted ? "accepted" : "conflict"; }

std::string_view to_string(Liar l) noexcept {
  switch (l) {
    case Liar::None: return "none";
    case Liar::TP1: return "TP1";
    case Liar::TP2: return "TP2";
    case Liar::Both: return "both";
  }
  return "unknown";
}

Variant variant_from_string(std::string_view text) {
  if (text == "classical_broadcast") return Variant::ClassicalBroadcast;
  if (text == "tp2_relay") return Variant::Tp2Relay;
  throw ConfigError("variant", "expected 'classical_broadcast' or 'tp2_relay', got '" + std::string(text) + "'");
}

Announcement make_announcement(PartyId source, int i, int j, const Bits& r, bool include_vector) {
  Announcement a;
  a.source = source;
  a.i = i;
  a.j = j;
  a.verdict = all_zero(r) ? Verdict::Identical : Verdict::Different;
  if (include_vector) a.r = r;
  return a;
}

void flip(Announcement& a) {
  if (a.verdict == Verdict::Identical) {
    a.verdict = Verdict::Different;
    if (a.r && !a.r->empty()) (*a.r)[0] ^= 1;
  } else {
    a.verdict = Verdict::Identical;
    if (a.r) std::fill(a.r->begin(), a.r->end(), std::uint8_t{0});
  }
}

bool consistent_with(const GhzSpec& claimed, Basis basis, const Outcome& outcome) {
  const ParticleSet full = all_particles(claimed.size());
  if (outcome.measured != full) {
    throw ContractError("state check needs one outcome from every participant");
  }
  if (basis == Basis::Z) {
    return outcome.bits == claimed.q_mask() || outcome.bits == (~claimed.q_mask() & full);
  }
  return (std::popcount(outcome.bits) & 1) == claimed.delta();
}

StateCheckReport step3_check(std::span<const int> positions, std::span<const Basis> bases,
                             std::span<const Outcome> outcomes, std::span<const GhzSpec> claimed) {
  if (positions.size() != bases.size() || positions.size() != outcomes.size()) {
    throw ContractError("step3_check: positions, bases and outcomes must align");
  }
  StateCheckReport report;
  report.registers.reserve(positions.size());
  for (std::size_t r = 0; r < positions.size(); ++r) {
    const auto pos = positions[r];
    if (pos < 0 || static_cast<std::size_t>(pos) >= claimed.size()) throw RangeError("check position out of range");
    RegisterCheck check;
    check.position = pos;
    check.basis = bases[r];
    check.outcome = outcomes[r];
    check.consistent = consistent_with(claimed[pos], bases[r], outcomes[r]);
    report.passed = report.passed && check.consistent;
    report.registers.push_back(check);
  }
  return report;
}

CrossCheck cross_check(const Announcement& from_tp1, const Announcement& from_tp2) {
  if (from_tp1.i != from_tp2.i || from_tp1.j != from_tp2.j) {
    throw ContractError("cross_check: announcements concern different pairs");
  }
  return from_tp1.verdict == from_tp2.verdict ? CrossCheck::Accepted : CrossCheck::Conflict;
}

Bits pair_pad(std::span<const GhzSpec> claimed, std::span<const int> key_positions, int i, int j,
              FaultInjection fault) {
  Bits pad(key_positions.size());
  for (std::size_t b = 0; b < key_positions.size(); ++b) {
    int t = t_xor(claimed[key_positions[b]], i, j);
    if (fault == FaultInjection::BrokenPad) t ^= 1;
    pad[b] = static_cast<std::uint8_t>(t);
  }
  return pad;
}

Liar arbiter_identify(std::span<const GhzSpec> committed, std::span<const int> key_positions,
                      std::span<const Bits> comparison_info, const Announcement& from_tp1,
                      const Announcement& from_tp2) {
  if (from_tp1.i != from_tp2.i || from_tp1.j != from_tp2.j) {
    throw ContractError("arbiter_identify: announcements concern different pairs");
  }
  const int i = from_tp1.i;
  const int j = from_tp1.j;
  if (i < 1 || j < 1 || static_cast<std::size_t>(std::max(i, j)) > comparison_info.size()) {
    throw RangeError("arbiter_identify: pair outside the comparison records");
  }
  const Bits r = xor_bits(pair_pad(committed, key_positions, i, j),
                          xor_bits(comparison_info[i - 1], comparison_info[j - 1]));
  const Verdict truth = all_zero(r) ? Verdict::Identical : Verdict::Different;
  const bool tp1_lied = from_tp1.verdict != truth;
  const bool tp2_lied = from_tp2.verdict != truth;
  if (tp1_lied && tp2_lied) return Liar::Both;
  if (tp1_lied) return Liar::TP1;
  if (tp2_lied) return Liar::TP2;
  return Liar::None;
}

bool substitution_half_detectable(const GhzSpec& checked, const GhzSpec& substituted) {
  if (checked.size() != substituted.size()) throw ContractError("specs of different sizes");
  const std::uint32_t rest = all_particles(checked.size()) & ~1u;
  const std::uint32_t diff = (checked.q_mask() ^ substituted.q_mask()) & rest;
  return diff == 0 || diff == rest;
}

namespace {

void validate_params(const ProtocolParams& p, const std::vector<Bits>& secrets) {
  if (p.n < GhzSpec::kMinParticles || p.n > GhzSpec::kMaxParticles) throw ContractError("n must be in [2, 20]");
  if (p.m < 1) throw ContractError("m must be at least 1");
  if (p.check_rounds < 0 || p.check_rounds > p.m) throw ContractError("check_rounds must be in [0, m]");
  if (p.decoy_count < 0) throw ContractError("decoy_count must be non-negative");
  if (p.decoy_tolerance < 0) throw ContractError("decoy_tolerance must be non-negative");
  if (secrets.size() != static_cast<std::size_t>(p.n)) throw ContractError("need one secret per participant");
  for (const auto& s : secrets) {
    if (s.size() != static_cast<std::size_t>(p.m)) throw ContractError("every secret must have m bits");
  }
  const auto count = family_size(p.n);
  for (auto idx : p.spec_pool) {
    if (idx < 1 || idx > count) throw ContractError("spec_pool index out of range");
  }
}

std::vector<int> complement(const std::vector<int>& chosen, int total) {
  std::vector<char> taken(static_cast<std::size_t>(total), 0);
  for (int p : chosen) taken[static_cast<std::size_t>(p)] = 1;
  std::vector<int> out;
  out.reserve(static_cast<std::size_t>(total) - chosen.size());
  for (int p = 0; p < total; ++p) {
    if (!taken[static_cast<std::size_t>(p)]) out.push_back(p);
  }
  return out;
}

nlohmann::json spec_indices(const std::vector<GhzSpec>& specs) {
  nlohmann::json out = nlohmann::json::array();
  for (const auto& s : specs) out.push_back(index_of(s));
  return out;
}

nlohmann::json announcement_json(const Announcement& a) {
  nlohmann::json out{{"pair", {a.i, a.j}}, {"verdict", std::string(to_string(a.verdict))}};
  if (a.r) out["r"] = to_string(*a.r);
  return out;
}

}  // namespace

ProtocolRun run_proposed(const ProtocolParams& params, const std::vector<Bits>& secrets, Adversary& adversary,
                         RandomStream& rng) {
  validate_params(params, secrets);
  const int n = params.n;
  const int m = params.m;
  const int total = 2 * m;
  const int checks = params.check_rounds;

  ProtocolRun run;
  run.transcript = ProtocolTranscript("proposed", params.record_events);
  run.n = n;
  run.m = m;
  run.secrets = secrets;
  auto& log = run.transcript;

  // Step 1: TP1 prepares 2m registers.
  run.prepared.reserve(static_cast<std::size_t>(total));
  const auto family = family_size(n);
  for (int r = 0; r < total; ++r) {
    const std::uint64_t index = params.spec_pool.empty()
                                    ? 1 + rng.below(family)
                                    : params.spec_pool[static_cast<std::size_t>(rng.below(params.spec_pool.size()))];
    run.prepared.push_back(ghz_from_index(index, n));
  }
  std::vector<QubitRegister> registers;
  registers.reserve(run.prepared.size());
  for (const auto& spec : run.prepared) registers.push_back(QubitRegister::ghz(spec));
  std::vector<GhzSpec> claimed = run.prepared;
  adversary.on_prepare(registers, claimed, rng);
  if (claimed.size() != run.prepared.size()) throw ContractError("claimed state list must cover every register");
  log.note(1, "TP1", "prepare", [&] { return nlohmann::json{{"registers", total}, {"n", n}}; });

  // Step 2: decoy-protected distribution and the eavesdropper check.
  for (int k = 1; k <= n; ++k) {
    std::vector<PhotonSlot> carriers;
    carriers.reserve(static_cast<std::size_t>(total));
    for (int r = 0; r < total; ++r) carriers.push_back(PhotonSlot::carrier(r, k));
    const auto decoys = generate_decoys(static_cast<std::size_t>(params.decoy_count), rng);
    auto merged = interleave(carriers, decoys, rng);

    QuantumChannel channel(PartyId::tp1(), PartyId::participant(k));
    adversary.attach_taps(channel, k);
    channel.transmit(merged.sequence, registers, rng);
    log.note(2, "TP1", "transmit", [&] {
      return nlohmann::json{{"to", PartyId::participant(k).name()},
                            {"length", merged.sequence.size()},
                            {"decoy_positions", merged.decoy_positions},
                            {"taps", channel.tap_count()}};
    });

    std::vector<DecoyAnnouncement> announcements;
    std::vector<int> results;
    announcements.reserve(decoys.size());
    results.reserve(decoys.size());
    for (std::size_t d = 0; d < decoys.size(); ++d) {
      const auto pos = merged.decoy_positions[d];
      const Basis basis = basis_of(decoys[d]);
      announcements.push_back({pos, basis});
      results.push_back(measure_decoy(merged.sequence[pos].decoy_state(), basis, rng));
    }
    const auto report = public_discussion(announcements, results, decoys,
                                          static_cast<std::size_t>(params.decoy_tolerance));
    log.note(2, "TP1", "decoy_check", [&] {
      return nlohmann::json{{"participant", PartyId::participant(k).name()},
                            {"checked", report.checked},
                            {"mismatches", report.mismatches},
                            {"passed", report.passed}};
    });
    if (!report.passed) {
      log.abort(2, AbortCause::DecoyMismatch,
                std::to_string(report.mismatches) + " decoy mismatches on link TP1->P" + std::to_string(k));
      run.attack = adversary.assess(run);
      return run;
    }
  }
  run.claimed = claimed;
  log.note(2, "TP1", "state_transfer", [&] { return nlohmann::json{{"to", "TP2"}, {"specs", spec_indices(claimed)}}; });

  // Step 3: P1 picks positions, P2 picks bases, everyone measures, TP2 checks.
  std::vector<int> all(static_cast<std::size_t>(total));
  std::iota(all.begin(), all.end(), 0);
  std::vector<int> checked;
  checked.reserve(static_cast<std::size_t>(checks));
  std::sample(all.begin(), all.end(), std::back_inserter(checked), checks, rng.engine());
  std::vector<Basis> bases(checked.size());
  for (auto& b : bases) b = rng.bit() ? Basis::X : Basis::Z;
  run.checked_positions = checked;

  std::vector<int> others_view = checked;
  if (params.variant == Variant::ClassicalBroadcast) {
    adversary.on_position_broadcast(others_view, total, rng);
    if (others_view.size() != checked.size() ||
        std::set<int>(others_view.begin(), others_view.end()).size() != others_view.size() ||
        std::any_of(others_view.begin(), others_view.end(), [&](int p) { return p < 0 || p >= total; })) {
      throw ContractError("tampered check positions must stay distinct and in range");
    }
  }
  log.note(3, "P1", "check_positions", [&] {
    return nlohmann::json{{"positions", checked},
                          {"delivered", others_view},
                          {"channel", params.variant == Variant::ClassicalBroadcast ? "classical" : "via_TP2"}};
  });
  log.note(3, "P2", "check_bases", [&] {
    std::string text;
    for (auto b : bases) text.push_back(basis_symbol(b));
    return nlohmann::json{{"bases", text}};
  });

  std::vector<Outcome> outcomes;
  outcomes.reserve(checked.size());
  for (std::size_t r = 0; r < checked.size(); ++r) {
    Outcome joint;
    for (int k = 1; k <= n; ++k) {
      const int pos = (k == 1) ? checked[r] : others_view[r];
      const auto single = registers[static_cast<std::size_t>(pos)].measure(ParticleSet{1} << (k - 1), bases[r], rng);
      joint.measured |= single.measured;
      joint.bits |= single.bits;
    }
    outcomes.push_back(joint);
  }
  auto check = step3_check(checked, bases, outcomes, claimed);
  for (std::size_t r = 0; r < checked.size(); ++r) {
    if (others_view[r] == checked[r]) continue;
    auto& reg = check.registers[r];
    reg.substituted = others_view[r];
    reg.half_detectable = substitution_half_detectable(run.prepared[static_cast<std::size_t>(checked[r])],
                                                       run.prepared[static_cast<std::size_t>(others_view[r])]);
  }
  run.checks = check.registers;
  log.note(3, "TP2", "state_check", [&] {
    nlohmann::json regs = nlohmann::json::array();
    for (const auto& c : check.registers) {
      regs.push_back({{"position", c.position},
                      {"basis", std::string(1, basis_symbol(c.basis))},
                      {"outcome", c.outcome.label(c.basis)},
                      {"consistent", c.consistent}});
    }
    return nlohmann::json{{"passed", check.passed}, {"registers", regs}};
  });
  if (!check.passed) {
    const auto bad = std::count_if(check.registers.begin(), check.registers.end(),
                                   [](const RegisterCheck& c) { return !c.consistent; });
    log.abort(3, AbortCause::StateCheckMismatch, std::to_string(bad) + " checked registers inconsistent");
    run.attack = adversary.assess(run);
    return run;
  }

  // Step 4: Z measurement of retained registers, C_i = K_i xor M_i.
  run.key_positions = complement(checked, total);
  run.key_positions.resize(static_cast<std::size_t>(m));
  run.participant_key_positions.resize(static_cast<std::size_t>(n));
  run.keys.resize(static_cast<std::size_t>(n));
  run.comparison.resize(static_cast<std::size_t>(n));
  for (int k = 1; k <= n; ++k) {
    auto own = complement(k == 1 ? checked : others_view, total);
    own.resize(static_cast<std::size_t>(m));
    Bits key(static_cast<std::size_t>(m));
    for (int b = 0; b < m; ++b) {
      const auto o = registers[static_cast<std::size_t>(own[static_cast<std::size_t>(b)])].measure(
          ParticleSet{1} << (k - 1), Basis::Z, rng);
      key[static_cast<std::size_t>(b)] = static_cast<std::uint8_t>(o.bit(k));
    }
    run.comparison[static_cast<std::size_t>(k - 1)] = xor_bits(key, secrets[static_cast<std::size_t>(k - 1)]);
    run.keys[static_cast<std::size_t>(k - 1)] = std::move(key);
    run.participant_key_positions[static_cast<std::size_t>(k - 1)] = std::move(own);
  }
  log.note(4, "participants", "key_measurement", [&] { return nlohmann::json{{"key_positions", run.key_positions}}; });

  // Step 5: C_i to both TPs over authenticated channels.
  for (int k = 1; k <= n; ++k) {
    log.note(5, PartyId::participant(k).name(), "comparison_info", [&] {
      return nlohmann::json{{"to", {"TP1", "TP2"}}, {"c", to_string(run.comparison[static_cast<std::size_t>(k - 1)])}};
    });
  }

  // Step 6: both TPs compute R_ij = T_ij xor C_i xor C_j and announce.
  for (int i = 1; i <= n; ++i) {
    for (int j = i + 1; j <= n; ++j) {
      PairResult pr;
      pr.i = i;
      pr.j = j;
      pr.truth = xor_bits(secrets[static_cast<std::size_t>(i - 1)], secrets[static_cast<std::size_t>(j - 1)]);
      const Bits cc = xor_bits(run.comparison[static_cast<std::size_t>(i - 1)],
                               run.comparison[static_cast<std::size_t>(j - 1)]);
      pr.r_tp1 = xor_bits(pair_pad(claimed, run.key_positions, i, j, params.fault), cc);
      pr.r_tp2 = xor_bits(pair_pad(claimed, run.key_positions, i, j, params.fault), cc);
      pr.tp1 = make_announcement(PartyId::tp1(), i, j, pr.r_tp1, params.announce_vectors);
      pr.tp2 = make_announcement(PartyId::tp2(), i, j, *pr.r_tp2, params.announce_vectors);
      adversary.on_announce(PartyId::tp1(), pr.tp1);
      adversary.on_announce(PartyId::tp2(), *pr.tp2);
      run.pairs.push_back(std::move(pr));
    }
  }
  for (const auto& pr : run.pairs) {
    log.note(6, "TP1", "announcement", [&] { return announcement_json(pr.tp1); });
    log.note(6, "TP2", "announcement", [&] { return announcement_json(*pr.tp2); });
  }

  // Step 7: participants compare the two announcements for every pair.
  int conflicts = 0;
  for (auto& pr : run.pairs) {
    pr.check = cross_check(pr.tp1, *pr.tp2);
    if (*pr.check == CrossCheck::Conflict) {
      ++conflicts;
      pr.liar = arbiter_identify(claimed, run.key_positions, run.comparison, pr.tp1, *pr.tp2);
    }
    log.note(7, PartyId::participant(pr.i).name(), "cross_check", [&] {
      nlohmann::json out{{"pair", {pr.i, pr.j}}, {"result", std::string(to_string(*pr.check))}};
      if (*pr.check == CrossCheck::Conflict) out["arbiter"] = std::string(to_string(pr.liar));
      return out;
    });
  }
  if (conflicts > 0) {
    log.abort(7, AbortCause::AnnouncementConflict, std::to_string(conflicts) + " pairs with conflicting announcements");
  } else {
    log.complete();
  }
  run.attack = adversary.assess(run);
  return run;
}

ProtocolRun run_proposed(const ProtocolParams& params, const std::vector<Bits>& secrets, RandomStream& rng) {
  NoAdversary none;
  return run_proposed(params, secrets, none, rng);
}

}  // namespace qpc
