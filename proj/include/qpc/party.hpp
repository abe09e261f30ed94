#pragma once

#include <string>

namespace qpc {

struct PartyId {
  enum class Role { TP1, TP2, Participant, Arbiter };

  Role role = Role::TP1;
  int index = 0;  // participant index 1..n, 0 otherwise

  static PartyId tp1() { return {Role::TP1, 0}; }
  static PartyId tp2() { return {Role::TP2, 0}; }
  static PartyId arbiter() { return {Role::Arbiter, 0}; }
  static PartyId participant(int k) { return {Role::Participant, k}; }

  std::string name() const {
    switch (role) {
      case Role::TP1: return "TP1";
      case Role::TP2: return "TP2";
      case Role::Arbiter: return "Arbiter";
      case Role::Participant: return "P" + std::to_string(index);
    }
    return "?";
  }

  friend bool operator==(const PartyId&, const PartyId&) = default;
};

}  // namespace qpc
