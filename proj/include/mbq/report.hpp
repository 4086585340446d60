#pragma once

#include <algorithm>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "mbq/linalg.hpp"

namespace mbq {

enum class Status { Pass, Fail, Skipped };

inline const char* to_string(Status s) {
  switch (s) {
    case Status::Pass: return "pass";
    case Status::Fail: return "fail";
    case Status::Skipped: return "skipped";
  }
  return "?";
}

/// One checked identity. `family` is the equation key without shift qualifiers
/// (e.g. id "EQ_242_n1_m-1" has family "EQ_242").
struct Entry {
  std::string id;
  std::string family;
  Status status = Status::Pass;
  std::optional<Witness> witness;
  std::string note;
  /// True when the check compared something nonzero (not a 0 = 0 identity).
  bool nonvacuous = false;
};

/// Builds "EQ_242_n1_m-1" style keys.
inline std::string key(const std::string& family) { return family; }
template <class... Rest>
std::string key(const std::string& family, char tag, int value, Rest... rest) {
  return key(family + "_" + tag + std::to_string(value), rest...);
}

class Report {
 public:
  const std::vector<Entry>& entries() const { return entries_; }

  void add(Entry e) { entries_.push_back(std::move(e)); }

  void merge(const Report& other) {
    entries_.insert(entries_.end(), other.entries_.begin(), other.entries_.end());
  }

  /// Exact equality of two linear maps; a failure records e_j and column j of lhs - rhs.
  bool equal(const std::string& id, const std::string& family, const LinMap& lhs, const LinMap& rhs,
             std::string note = {}) {
    Entry e{id, family, Status::Pass, std::nullopt, std::move(note), false};
    if (lhs.cod() != rhs.cod() || lhs.dom() != rhs.dom()) {
      e.status = Status::Fail;
      e.witness = Witness{};
      e.note += (e.note.empty() ? "" : "; ") + std::string("shape mismatch");
      add(std::move(e));
      return false;
    }
    LinMap diff = lhs - rhs;
    for (size_t j = 0; j < diff.dom(); ++j) {
      if (diff.col(j).empty()) continue;
      e.status = Status::Fail;
      e.witness = Witness{basis_vector(diff.dom(), j), diff.column(j)};
      e.nonvacuous = true;
      add(std::move(e));
      return false;
    }
    e.nonvacuous = !lhs.is_zero();
    add(std::move(e));
    return true;
  }

  bool equal(const std::string& id, const LinMap& lhs, const LinMap& rhs, std::string note = {}) {
    return equal(id, id, lhs, rhs, std::move(note));
  }

  bool equal(const std::string& id, const std::string& family, const AntilinMap& lhs, const AntilinMap& rhs,
             std::string note = {}) {
    return equal(id, family, lhs.linear_part(), rhs.linear_part(), std::move(note));
  }

  /// a is contained in b; a failure records a vector of a outside b and its remainder modulo b.
  bool subset(const std::string& id, const std::string& family, const Subspace& a, const Subspace& b,
              std::string note = {}) {
    Entry e{id, family, Status::Pass, std::nullopt, std::move(note), a.dim() > 0};
    if (auto v = a.first_outside(b)) {
      e.status = Status::Fail;
      e.witness = Witness{*v, b.residual(*v)};
    }
    bool ok = e.status == Status::Pass;
    add(std::move(e));
    return ok;
  }

  bool same_space(const std::string& id, const std::string& family, const Subspace& a, const Subspace& b,
                  std::string note = {}) {
    Entry e{id, family, Status::Pass, std::nullopt, std::move(note), a.dim() > 0 || b.dim() > 0};
    if (auto v = a.first_outside(b)) {
      e.status = Status::Fail;
      e.witness = Witness{*v, b.residual(*v)};
    } else if (auto w = b.first_outside(a)) {
      e.status = Status::Fail;
      e.witness = Witness{*w, a.residual(*w)};
    }
    bool ok = e.status == Status::Pass;
    add(std::move(e));
    return ok;
  }

  /// Boolean fact; failures carry the supplied witness.
  bool truth(const std::string& id, const std::string& family, bool ok, bool nonvacuous, std::string note = {},
             std::optional<Witness> witness = std::nullopt) {
    Entry e{id, family, ok ? Status::Pass : Status::Fail, std::nullopt, std::move(note), nonvacuous};
    if (!ok) e.witness = witness ? std::move(witness) : Witness{};
    add(std::move(e));
    return ok;
  }

  void fail(const std::string& id, const std::string& family, Witness w, std::string note) {
    add(Entry{id, family, Status::Fail, std::move(w), std::move(note), true});
  }

  void skip(const std::string& id, const std::string& family, std::string note) {
    add(Entry{id, family, Status::Skipped, std::nullopt, std::move(note), false});
  }

  size_t count(Status s) const {
    return static_cast<size_t>(
        std::count_if(entries_.begin(), entries_.end(), [s](const Entry& e) { return e.status == s; }));
  }

  bool ok() const { return count(Status::Fail) == 0; }

  const Entry* find(const std::string& id) const {
    for (const auto& e : entries_)
      if (e.id == id) return &e;
    return nullptr;
  }

  bool passed(const std::string& id) const {
    const Entry* e = find(id);
    return e && e->status == Status::Pass;
  }

  /// All entries whose family matches.
  std::vector<const Entry*> family(const std::string& fam) const {
    std::vector<const Entry*> out;
    for (const auto& e : entries_)
      if (e.family == fam) out.push_back(&e);
    return out;
  }

 private:
  std::vector<Entry> entries_;
};

}  // namespace mbq
