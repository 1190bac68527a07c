#include "pmm/instance.hpp"

#include <algorithm>
#include <fstream>
#include <map>
#include <sstream>

#include <nlohmann/json.hpp>

#include "pmm/errors.hpp"

namespace pmm {

using nlohmann::json;

std::shared_ptr<const DistanceTable> DistanceTable::from_matrix(
    std::vector<std::vector<Rat>> rows) {
  auto t = std::make_shared<DistanceTable>();
  t->n_ = static_cast<int>(rows.size());
  t->kind_ = MetricDataKind::Matrix;
  t->dist_.reserve(static_cast<size_t>(t->n_) * t->n_);
  for (const auto& row : rows) {
    if (static_cast<int>(row.size()) != t->n_)
      throw ParseError("metric matrix is not square");
    for (const Rat& v : row) t->dist_.push_back(v);
  }
  return t;
}

std::shared_ptr<const DistanceTable> DistanceTable::from_l1_points(
    std::vector<std::vector<Rat>> coords) {
  auto t = std::make_shared<DistanceTable>();
  t->n_ = static_cast<int>(coords.size());
  t->kind_ = MetricDataKind::L1Points;
  size_t dim = coords.empty() ? 0 : coords[0].size();
  for (const auto& c : coords)
    if (c.size() != dim) throw ParseError("l1 points must share one dimension");
  t->dist_.assign(static_cast<size_t>(t->n_) * t->n_, Rat(0));
  for (int p = 0; p < t->n_; ++p)
    for (int q = p + 1; q < t->n_; ++q) {
      Rat s = 0;
      for (size_t a = 0; a < dim; ++a) s += abs(coords[p][a] - coords[q][a]);
      t->dist_[static_cast<size_t>(p) * t->n_ + q] = s;
      t->dist_[static_cast<size_t>(q) * t->n_ + p] = s;
    }
  return t;
}

std::vector<std::string> DistanceTable::check_axioms(bool skip_triangle) const {
  std::vector<std::string> out;
  if (kind_ == MetricDataKind::L1Points) return out;  // holds by construction
  for (int p = 0; p < n_; ++p) {
    if (d(p, p) != 0) out.push_back("metric: nonzero diagonal at point " + std::to_string(p));
    for (int q = 0; q < n_; ++q) {
      if (d(p, q) < 0)
        out.push_back("metric: negative distance at (" + std::to_string(p) + "," +
                      std::to_string(q) + ")");
      if (q > p && d(p, q) != d(q, p))
        out.push_back("metric: asymmetry at (" + std::to_string(p) + "," + std::to_string(q) + ")");
    }
  }
  if (!out.empty() || skip_triangle) return out;
  for (int p = 0; p < n_; ++p)
    for (int q = 0; q < n_; ++q)
      for (int r = 0; r < n_; ++r)
        if (d(p, q) > d(p, r) + d(r, q)) {
          out.push_back("metric: triangle inequality fails for (" + std::to_string(p) + "," +
                        std::to_string(q) + "," + std::to_string(r) + ")");
          return out;  // one witness is enough
        }
  return out;
}

int Instance::facility_index(const std::string& id) const {
  for (int i = 0; i < nf(); ++i)
    if (facilities[i].id == id) return i;
  return -1;
}

int Instance::client_index(const std::string& id) const {
  for (int j = 0; j < nc(); ++j)
    if (clients[j].id == id) return j;
  return -1;
}

std::vector<int> Instance::facilities_by_distance(int j) const {
  std::vector<int> order(nf());
  for (int i = 0; i < nf(); ++i) order[i] = i;
  std::stable_sort(order.begin(), order.end(),
                   [&](int a, int b) { return dfc(a, j) < dfc(b, j); });
  return order;
}

bool Instance::uniform_radii() const {
  for (int j = 1; j < nc(); ++j)
    if (clients[j].radius != clients[0].radius) return false;
  return true;
}

std::vector<std::string> validate_instance(const Instance& inst, const ValidationOptions& opts) {
  std::vector<std::string> out;
  std::map<std::string, int> seen;
  for (const Facility& f : inst.facilities) {
    if (++seen[f.id] > 1) out.push_back("duplicate id '" + f.id + "'");
    if (f.open_cost < 0) out.push_back("facility '" + f.id + "' has negative cost");
  }
  for (const Client& c : inst.clients) {
    if (++seen[c.id] > 1) out.push_back("duplicate id '" + c.id + "'");
    if (c.radius < 0) out.push_back("client '" + c.id + "' has negative radius");
    if (c.demand < 0) out.push_back("client '" + c.id + "' has negative demand");
  }
  if (inst.nf() == 0) out.push_back("no facilities");
  if (inst.nc() == 0) out.push_back("no clients");
  if (inst.nf() > 30) out.push_back("at most 30 facilities supported");
  if (!inst.table) {
    out.push_back("missing metric");
    return out;
  }
  int n = inst.table->size();
  for (int p : inst.fac_point)
    if (p < 0 || p >= n) out.push_back("facility metric index out of range");
  for (int p : inst.client_point)
    if (p < 0 || p >= n) out.push_back("client metric index out of range");
  if (!out.empty()) return out;
  auto metric_problems = inst.table->check_axioms(opts.skip_triangle);
  out.insert(out.end(), metric_problems.begin(), metric_problems.end());
  try {
    if (inst.matroid.ground_size != inst.nf())
      out.push_back("matroid ground size != number of facilities");
    else
      inst.matroid.validate();
  } catch (const ValidationError& e) {
    out.push_back(e.what());
  }
  return out;
}

void validate_instance_or_throw(const Instance& inst, const ValidationOptions& opts) {
  auto problems = validate_instance(inst, opts);
  if (problems.empty()) return;
  std::string msg = "invalid instance:";
  for (const auto& p : problems) msg += "\n  - " + p;
  throw ValidationError(msg);
}

namespace {

Rat rat_from_json(const json& v, const std::string& what) {
  if (v.is_string()) return rat_from_string(v.get<std::string>());
  if (v.is_number_integer()) return Rat(static_cast<long>(v.get<long long>()));
  if (v.is_number_unsigned()) return Rat(static_cast<unsigned long>(v.get<unsigned long long>()));
  throw ParseError(what + ": expected an integer or a rational string, got " + v.dump());
}

MatroidSpec matroid_from_json(const json& m, const Instance& inst) {
  MatroidSpec spec;
  spec.ground_size = inst.nf();
  if (!m.is_object() || !m.contains("type"))
    throw ParseError("matroid: expected an object with a 'type' field");
  std::string type = m.at("type").get<std::string>();
  auto parse_sets = [&](const char* sets_key) {
    for (const auto& arr : m.at(sets_key)) {
      Mask mask = 0;
      for (const auto& idv : arr) {
        int i = inst.facility_index(idv.get<std::string>());
        if (i < 0) throw ParseError("matroid: unknown facility id " + idv.dump());
        mask |= mask_bit(i);
      }
      spec.sets.push_back(mask);
    }
    for (const auto& c : m.at("caps")) spec.caps.push_back(c.get<int>());
  };
  if (type == "uniform") {
    spec.kind = MatroidKind::Uniform;
    spec.k = m.at("k").get<int>();
  } else if (type == "partition") {
    spec.kind = MatroidKind::Partition;
    parse_sets("parts");
  } else if (type == "laminar") {
    spec.kind = MatroidKind::Laminar;
    parse_sets("sets");
  } else if (type == "graphic") {
    spec.kind = MatroidKind::Graphic;
    spec.graph_vertices = m.at("vertices").get<int>();
    spec.edges.assign(inst.nf(), {0, 0});
    const auto& edges = m.at("edges");
    if (static_cast<int>(edges.size()) != inst.nf())
      throw ParseError("graphic matroid: need exactly one edge per facility");
    for (auto it = edges.begin(); it != edges.end(); ++it) {
      int i = inst.facility_index(it.key());
      if (i < 0) throw ParseError("graphic matroid: unknown facility id '" + it.key() + "'");
      const auto& uv = it.value();
      if (!uv.is_array() || uv.size() != 2)
        throw ParseError("graphic matroid: edge must be [u, v]");
      spec.edges[i] = {uv[0].get<int>(), uv[1].get<int>()};
    }
  } else {
    throw ParseError("matroid: unknown type '" + type + "'");
  }
  return spec;
}

}  // namespace

Instance instance_from_json_text(const std::string& text) {
  json doc;
  try {
    doc = json::parse(text);
  } catch (const json::exception& e) {
    throw ParseError(std::string("bad JSON: ") + e.what());
  }
  try {
    Instance inst;
    for (const auto& f : doc.at("facilities"))
      inst.facilities.push_back(
          {f.at("id").get<std::string>(), rat_from_json(f.at("cost"), "facility cost")});
    for (const auto& c : doc.at("clients")) {
      Client cl;
      cl.id = c.at("id").get<std::string>();
      cl.radius = rat_from_json(c.at("radius"), "client radius");
      cl.demand = c.contains("demand") ? rat_from_json(c.at("demand"), "client demand") : Rat(1);
      inst.clients.push_back(cl);
    }
    const auto& metric = doc.at("metric");
    std::string kind = metric.at("kind").get<std::string>();
    int npoints = inst.nf() + inst.nc();
    if (kind == "matrix") {
      std::vector<std::vector<Rat>> rows;
      for (const auto& row : metric.at("rows")) {
        rows.emplace_back();
        for (const auto& v : row) rows.back().push_back(rat_from_json(v, "metric entry"));
      }
      if (static_cast<int>(rows.size()) != npoints)
        throw ParseError("metric matrix must have one row per facility and client");
      inst.table = DistanceTable::from_matrix(std::move(rows));
    } else if (kind == "l1") {
      const auto& points = metric.at("points");
      std::vector<std::vector<Rat>> coords;
      auto fetch = [&](const std::string& id) {
        if (!points.contains(id)) throw ParseError("l1 metric: missing point for id '" + id + "'");
        std::vector<Rat> c;
        for (const auto& v : points.at(id)) c.push_back(rat_from_json(v, "l1 coordinate"));
        coords.push_back(std::move(c));
      };
      for (const auto& f : inst.facilities) fetch(f.id);
      for (const auto& c : inst.clients) fetch(c.id);
      inst.table = DistanceTable::from_l1_points(std::move(coords));
    } else {
      throw ParseError("metric: unknown kind '" + kind + "'");
    }
    inst.fac_point.resize(inst.nf());
    inst.client_point.resize(inst.nc());
    for (int i = 0; i < inst.nf(); ++i) inst.fac_point[i] = i;
    for (int j = 0; j < inst.nc(); ++j) inst.client_point[j] = inst.nf() + j;
    inst.matroid = matroid_from_json(doc.at("matroid"), inst);
    return inst;
  } catch (const json::exception& e) {
    throw ParseError(std::string("bad instance JSON: ") + e.what());
  }
}

Instance load_instance(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ParseError("cannot open '" + path + "'");
  std::stringstream ss;
  ss << in.rdbuf();
  return instance_from_json_text(ss.str());
}

}  // namespace pmm
