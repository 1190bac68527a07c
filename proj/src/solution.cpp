#include "pmm/solution.hpp"

#include <algorithm>
#include <map>

#include <nlohmann/json.hpp>

#include "pmm/errors.hpp"

namespace pmm {

using ordered_json = nlohmann::ordered_json;

Rat FracSolution::x_mass(int j) const {
  Rat s = 0;
  for (const auto& [i, v] : x[j]) s += v;
  return s;
}

Rat FracSolution::x_value(int j, int i) const {
  for (const auto& [fi, v] : x[j])
    if (fi == i) return v;
  return Rat(0);
}

Rat lp_cost(const Instance& inst, const FracSolution& frac) {
  Rat total = 0;
  for (int i = 0; i < inst.nf(); ++i) total += inst.facilities[i].open_cost * frac.y[i];
  for (int j = 0; j < inst.nc(); ++j) total += inst.clients[j].demand * frac.cbar[j];
  return total;
}

Rat lp_cost_restricted(const Instance& inst, const FracSolution& frac,
                       const std::vector<int>& clients, const std::vector<Rat>& demands) {
  check_internal(clients.size() == demands.size(), "lp_cost_restricted: length mismatch");
  Rat total = 0;
  for (int i = 0; i < inst.nf(); ++i) total += inst.facilities[i].open_cost * frac.y[i];
  for (size_t t = 0; t < clients.size(); ++t) total += demands[t] * frac.cbar[clients[t]];
  return total;
}

std::vector<std::string> check_frac_feasible(const Instance& inst, const FracSolution& frac,
                                             int enum_cap) {
  std::vector<std::string> out;
  if (static_cast<int>(frac.y.size()) != inst.nf() ||
      static_cast<int>(frac.x.size()) != inst.nc() ||
      static_cast<int>(frac.cbar.size()) != inst.nc()) {
    out.push_back("fractional solution has wrong shape");
    return out;
  }
  for (int i = 0; i < inst.nf(); ++i)
    if (frac.y[i] < 0 || frac.y[i] > 1)
      out.push_back("y out of [0,1] at facility " + inst.facilities[i].id);
  for (int j = 0; j < inst.nc(); ++j) {
    Rat mass = 0, conn = 0;
    for (const auto& [i, v] : frac.x[j]) {
      if (v < 0) out.push_back("negative x at (" + inst.facilities[i].id + "," + inst.clients[j].id + ")");
      if (v > frac.y[i])
        out.push_back("x > y at (" + inst.facilities[i].id + "," + inst.clients[j].id + ")");
      if (inst.dfc(i, j) > inst.clients[j].radius)
        out.push_back("x mass beyond radius at (" + inst.facilities[i].id + "," +
                      inst.clients[j].id + ")");
      mass += v;
      conn += inst.dfc(i, j) * v;
    }
    if (mass < 1) out.push_back("client " + inst.clients[j].id + " covered by mass < 1");
    if (conn != frac.cbar[j]) out.push_back("cached cbar mismatch at client " + inst.clients[j].id);
  }
  if (auto row = separate(inst.matroid, frac.y, enum_cap))
    out.push_back("y violates matroid rank row (violation " + rat_to_string(row->violation) + ")");
  return out;
}

Rat solution_cost(const Instance& inst, const std::vector<int>& open,
                  const std::vector<int>& assign) {
  check_internal(static_cast<int>(assign.size()) == inst.nc(), "solution_cost: bad assignment");
  Rat total = 0;
  for (int i : open) total += inst.facilities[i].open_cost;
  for (int j = 0; j < inst.nc(); ++j)
    total += inst.clients[j].demand * inst.dfc(assign[j], j);
  return total;
}

DilationReport dilation(const Instance& inst, const std::vector<int>& assign) {
  DilationReport rep;
  rep.per_client.resize(inst.nc());
  for (int j = 0; j < inst.nc(); ++j) {
    const Rat& d = inst.dfc(assign[j], j);
    const Rat& r = inst.clients[j].radius;
    if (r == 0) {
      rep.per_client[j] = std::nullopt;
      if (d != 0) rep.zero_radius_served_at_zero = false;
    } else {
      Rat ratio = d / r;
      rep.per_client[j] = ratio;
      if (!rep.max_dilation || ratio > *rep.max_dilation) rep.max_dilation = ratio;
    }
  }
  return rep;
}

std::string solution_to_json_text(const Instance& inst, const IntegralSolution& sol,
                                  const std::string& mode, const Ledger& ledger, bool decimal) {
  ordered_json doc;
  doc["mode"] = mode;
  doc["open"] = ordered_json::array();
  for (int i : sol.open) doc["open"].push_back(inst.facilities[i].id);
  doc["assign"] = ordered_json::object();
  for (int j = 0; j < inst.nc(); ++j)
    doc["assign"][inst.clients[j].id] = inst.facilities[sol.assign[j]].id;
  doc["cost"] = rat_to_string(sol.cost);
  DilationReport dil = dilation(inst, sol.assign);
  if (dil.max_dilation)
    doc["max_dilation"] = rat_to_string(*dil.max_dilation);
  else
    doc["max_dilation"] = nullptr;
  doc["zero_radius_served_at_zero"] = dil.zero_radius_served_at_zero;
  if (decimal) {
    doc["cost_decimal"] = rat_to_double(sol.cost);
    if (dil.max_dilation) doc["max_dilation_decimal"] = rat_to_double(*dil.max_dilation);
  }
  doc["ledger"] = ordered_json::array();
  for (const LedgerRow& row : ledger.rows()) {
    ordered_json r;
    r["name"] = row.name;
    r["op"] = row.op;
    r["lhs"] = rat_to_string(row.lhs);
    r["rhs"] = rat_to_string(row.rhs);
    r["holds"] = row.holds;
    if (!row.witness.empty()) r["witness"] = row.witness;
    doc["ledger"].push_back(std::move(r));
  }
  return doc.dump(2) + "\n";
}

ParsedSolution solution_from_json_text(const std::string& text) {
  ordered_json doc;
  try {
    doc = ordered_json::parse(text);
  } catch (const ordered_json::exception& e) {
    throw ParseError(std::string("bad solution JSON: ") + e.what());
  }
  try {
    ParsedSolution out;
    for (const auto& id : doc.at("open")) out.open_ids.push_back(id.get<std::string>());
    for (auto it = doc.at("assign").begin(); it != doc.at("assign").end(); ++it)
      out.assign_ids.emplace_back(it.key(), it.value().get<std::string>());
    out.cost = rat_from_string(doc.at("cost").get<std::string>());
    if (!doc.at("max_dilation").is_null())
      out.max_dilation = rat_from_string(doc.at("max_dilation").get<std::string>());
    out.zero_radius_served_at_zero = doc.value("zero_radius_served_at_zero", true);
    if (doc.contains("ledger"))
      for (const auto& row : doc.at("ledger"))
        if (!row.at("holds").get<bool>()) out.all_ledger_rows_hold = false;
    return out;
  } catch (const ordered_json::exception& e) {
    throw ParseError(std::string("bad solution JSON: ") + e.what());
  }
}

std::vector<std::string> verify_solution(const Instance& inst, const ParsedSolution& sol) {
  std::vector<std::string> out;
  std::vector<int> open;
  Mask open_mask = 0;
  for (const auto& id : sol.open_ids) {
    int i = inst.facility_index(id);
    if (i < 0) {
      out.push_back("open: unknown facility '" + id + "'");
      continue;
    }
    open.push_back(i);
    open_mask |= mask_bit(i);
  }
  if (!out.empty()) return out;
  RankProfile rp(inst.matroid);
  if (!rp.is_independent(open_mask)) out.push_back("open set is not independent in the matroid");

  std::vector<int> assign(inst.nc(), -1);
  for (const auto& [cid, fid] : sol.assign_ids) {
    int j = inst.client_index(cid);
    int i = inst.facility_index(fid);
    if (j < 0) out.push_back("assign: unknown client '" + cid + "'");
    if (i < 0) out.push_back("assign: unknown facility '" + fid + "'");
    if (j >= 0 && i >= 0) {
      if (!mask_has(open_mask, i))
        out.push_back("client '" + cid + "' assigned to a closed facility");
      assign[j] = i;
    }
  }
  for (int j = 0; j < inst.nc(); ++j)
    if (assign[j] < 0) out.push_back("client '" + inst.clients[j].id + "' has no assignment");
  if (!out.empty()) return out;

  Rat cost = solution_cost(inst, open, assign);
  if (cost != sol.cost)
    out.push_back("cost mismatch: file says " + rat_to_string(sol.cost) + ", recomputed " +
                  rat_to_string(cost));
  DilationReport dil = dilation(inst, assign);
  if (dil.max_dilation.has_value() != sol.max_dilation.has_value() ||
      (dil.max_dilation && *dil.max_dilation != *sol.max_dilation))
    out.push_back("max_dilation mismatch: file says " +
                  (sol.max_dilation ? rat_to_string(*sol.max_dilation) : std::string("null")) +
                  ", recomputed " +
                  (dil.max_dilation ? rat_to_string(*dil.max_dilation) : std::string("null")));
  if (dil.zero_radius_served_at_zero != sol.zero_radius_served_at_zero)
    out.push_back("zero_radius_served_at_zero mismatch");
  if (!sol.all_ledger_rows_hold) out.push_back("solution file records a failed ledger row");
  return out;
}

}  // namespace pmm
