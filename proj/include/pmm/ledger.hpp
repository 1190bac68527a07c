#pragma once

#include <string>
#include <vector>

#include "pmm/rational.hpp"

namespace pmm {

// One certified inequality: "lhs op rhs" evaluated in exact arithmetic.
// Quantified families are reduced to their worst witness (max of lhs - rhs).
struct LedgerRow {
  std::string name;
  std::string op;  // "<=", "<", "==", "bool"
  Rat lhs;
  Rat rhs;
  bool holds = false;
  std::string witness;
};

// Accumulates the worst (lhs, rhs) pair of a quantified inequality family.
struct WorstPair {
  bool any = false;
  Rat lhs;
  Rat rhs;
  std::string witness;

  void update(const Rat& l, const Rat& r, const std::string& w) {
    if (!any || l - r > lhs - rhs) {
      any = true;
      lhs = l;
      rhs = r;
      witness = w;
    }
  }
};

class Ledger {
 public:
  void require_le(const std::string& name, const Rat& lhs, const Rat& rhs,
                  const std::string& witness = "");
  void require_lt(const std::string& name, const Rat& lhs, const Rat& rhs,
                  const std::string& witness = "");
  void require_eq(const std::string& name, const Rat& lhs, const Rat& rhs,
                  const std::string& witness = "");
  void require_true(const std::string& name, bool ok, const std::string& witness = "");
  // Worst-witness row for a family of <= (or <) comparisons; an empty
  // accumulator records a vacuously true row.
  void require_worst_le(const std::string& name, const WorstPair& w);
  void require_worst_lt(const std::string& name, const WorstPair& w);

  const std::vector<LedgerRow>& rows() const { return rows_; }
  bool all_hold() const;
  const LedgerRow* first_failure() const;
  // Throws InternalError naming the first failing row, if any.
  void throw_if_failed() const;

 private:
  std::vector<LedgerRow> rows_;
};

}  // namespace pmm
