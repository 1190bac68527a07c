#include "pmm/ledger.hpp"

#include "pmm/errors.hpp"

namespace pmm {

void Ledger::require_le(const std::string& name, const Rat& lhs, const Rat& rhs,
                        const std::string& witness) {
  rows_.push_back({name, "<=", lhs, rhs, lhs <= rhs, witness});
}

void Ledger::require_lt(const std::string& name, const Rat& lhs, const Rat& rhs,
                        const std::string& witness) {
  rows_.push_back({name, "<", lhs, rhs, lhs < rhs, witness});
}

void Ledger::require_eq(const std::string& name, const Rat& lhs, const Rat& rhs,
                        const std::string& witness) {
  rows_.push_back({name, "==", lhs, rhs, lhs == rhs, witness});
}

void Ledger::require_true(const std::string& name, bool ok, const std::string& witness) {
  rows_.push_back({name, "bool", Rat(ok ? 1 : 0), Rat(1), ok, witness});
}

void Ledger::require_worst_le(const std::string& name, const WorstPair& w) {
  if (!w.any) {
    rows_.push_back({name, "<=", Rat(0), Rat(0), true, "vacuous"});
    return;
  }
  require_le(name, w.lhs, w.rhs, w.witness);
}

void Ledger::require_worst_lt(const std::string& name, const WorstPair& w) {
  if (!w.any) {
    rows_.push_back({name, "<", Rat(0), Rat(1), true, "vacuous"});
    return;
  }
  require_lt(name, w.lhs, w.rhs, w.witness);
}

bool Ledger::all_hold() const {
  for (const auto& r : rows_)
    if (!r.holds) return false;
  return true;
}

const LedgerRow* Ledger::first_failure() const {
  for (const auto& r : rows_)
    if (!r.holds) return &r;
  return nullptr;
}

void Ledger::throw_if_failed() const {
  const LedgerRow* f = first_failure();
  if (!f) return;
  throw InternalError("ledger row failed: " + f->name + " (" + rat_to_string(f->lhs) + " " +
                      f->op + " " + rat_to_string(f->rhs) +
                      (f->witness.empty() ? "" : ", witness: " + f->witness) + ")");
}

}  // namespace pmm
