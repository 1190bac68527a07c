#include "pmm/generator.hpp"

#include <algorithm>
#include <random>
#include <vector>

#include <nlohmann/json.hpp>

#include "pmm/errors.hpp"
#include "pmm/instance.hpp"
#include "pmm/relaxation.hpp"

namespace pmm {

namespace {

using ordered_json = nlohmann::ordered_json;

// mt19937_64 output is pinned by the standard; drawing bounded values below
// via rejection keeps files identical across platforms and libraries.
class Rng {
 public:
  explicit Rng(std::uint64_t seed) : eng_(seed) {}

  int below(int n) {
    check_internal(n > 0, "Rng::below needs a positive bound");
    const std::uint64_t bound = UINT64_MAX - UINT64_MAX % static_cast<std::uint64_t>(n);
    for (;;) {
      std::uint64_t v = eng_();
      if (v < bound) return static_cast<int>(v % static_cast<std::uint64_t>(n));
    }
  }

  template <typename T>
  void shuffle(std::vector<T>& v) {
    for (int i = static_cast<int>(v.size()) - 1; i > 0; --i)
      std::swap(v[i], v[below(i + 1)]);
  }

 private:
  std::mt19937_64 eng_;
};

struct Draw {
  std::vector<std::vector<int>> fac_points, client_points;
  std::vector<int> costs, demands;
  std::vector<Rat> radii;
  ordered_json matroid;
};

Rat l1(const std::vector<int>& a, const std::vector<int>& b) {
  Rat d = 0;
  for (size_t c = 0; c < a.size(); ++c) d += a[c] >= b[c] ? a[c] - b[c] : b[c] - a[c];
  return d;
}

ordered_json draw_matroid(const GenOptions& o, Rng& rng) {
  const int nf = o.facilities;
  auto fid = [](int i) { return "f" + std::to_string(i + 1); };
  ordered_json m;
  if (o.matroid == "uniform") {
    m["type"] = "uniform";
    m["k"] = 1 + rng.below(nf);
  } else if (o.matroid == "partition") {
    m["type"] = "partition";
    std::vector<int> perm(nf);
    for (int i = 0; i < nf; ++i) perm[i] = i;
    rng.shuffle(perm);
    const int nparts = 1 + rng.below(std::min(nf, 4));
    std::vector<int> cut;  // nparts-1 distinct cut positions in [1, nf-1]
    while (static_cast<int>(cut.size()) < nparts - 1) {
      int c = 1 + rng.below(nf - 1);
      if (std::find(cut.begin(), cut.end(), c) == cut.end()) cut.push_back(c);
    }
    cut.push_back(0);
    cut.push_back(nf);
    std::sort(cut.begin(), cut.end());
    ordered_json parts = ordered_json::array(), caps = ordered_json::array();
    for (size_t p = 0; p + 1 < cut.size(); ++p) {
      ordered_json part = ordered_json::array();
      for (int i = cut[p]; i < cut[p + 1]; ++i) part.push_back(fid(perm[i]));
      parts.push_back(part);
      caps.push_back(1 + rng.below(cut[p + 1] - cut[p]));
    }
    m["parts"] = parts;
    m["caps"] = caps;
  } else if (o.matroid == "laminar") {
    m["type"] = "laminar";
    std::vector<int> perm(nf);
    for (int i = 0; i < nf; ++i) perm[i] = i;
    rng.shuffle(perm);
    // A nested chain of shuffled prefixes: full set, then two shrinking cores.
    std::vector<int> sizes = {nf};
    if (nf >= 3) sizes.push_back(1 + nf / 2);
    if (nf >= 5) sizes.push_back(1 + nf / 4);
    ordered_json sets = ordered_json::array(), caps = ordered_json::array();
    for (int sz : sizes) {
      ordered_json set = ordered_json::array();
      for (int i = 0; i < sz; ++i) set.push_back(fid(perm[i]));
      sets.push_back(set);
      caps.push_back(1 + rng.below(sz));
    }
    m["sets"] = sets;
    m["caps"] = caps;
  } else if (o.matroid == "graphic") {
    m["type"] = "graphic";
    const int nv = 2 + rng.below(nf);
    m["vertices"] = nv;
    ordered_json edges = ordered_json::object();
    for (int i = 0; i < nf; ++i) {
      int u = rng.below(nv);
      int v = rng.below(nv - 1);
      if (v >= u) ++v;  // no self-loops: they would be permanently rank 0
      edges[fid(i)] = ordered_json::array({u, v});
    }
    m["edges"] = edges;
  } else {
    throw ValidationError("unknown matroid kind '" + o.matroid +
                          "' (want uniform, partition, laminar, or graphic)");
  }
  return m;
}

Draw draw_once(const GenOptions& o, Rng& rng) {
  Draw d;
  auto point = [&] {
    std::vector<int> p(o.dims);
    for (int c = 0; c < o.dims; ++c) p[c] = rng.below(o.grid + 1);
    return p;
  };
  for (int i = 0; i < o.facilities; ++i) {
    d.fac_points.push_back(point());
    d.costs.push_back(rng.below(o.max_cost + 1));
  }
  d.matroid = draw_matroid(o, rng);

  std::vector<bool> zero_pin(o.clients, false);
  for (int j = 0; j < o.clients; ++j) {
    if (!o.uniform_radius && !o.plant_infeasible && o.zero_radius_percent > 0 &&
        rng.below(100) < o.zero_radius_percent) {
      zero_pin[j] = true;
      d.client_points.push_back(d.fac_points[rng.below(o.facilities)]);
    } else {
      d.client_points.push_back(point());
    }
    d.demands.push_back(1 + rng.below(o.max_demand));
  }

  const int q = std::max(1, std::min(o.q, o.facilities));
  std::vector<Rat> qdist(o.clients), mindist(o.clients);
  for (int j = 0; j < o.clients; ++j) {
    std::vector<Rat> ds;
    for (int i = 0; i < o.facilities; ++i) ds.push_back(l1(d.fac_points[i], d.client_points[j]));
    std::sort(ds.begin(), ds.end());
    mindist[j] = ds.front();
    qdist[j] = ds[q - 1];
  }

  if (o.plant_infeasible) {
    int victim = rng.below(o.clients);
    if (mindist[victim] == 0) {
      // Nudge the client off every facility point so a positive gap exists.
      for (int c = 0; c < o.dims; ++c) d.client_points[victim][c] += 2 * c + 1;
      mindist[victim] = l1(d.fac_points[0], d.client_points[victim]);
      for (int i = 1; i < o.facilities; ++i)
        mindist[victim] =
            rat_min(mindist[victim], l1(d.fac_points[i], d.client_points[victim]));
      check_internal(mindist[victim] > 0, "planted client still sits on a facility");
    }
    const Rat planted = mindist[victim] / 2;
    if (o.uniform_radius) {
      d.radii.assign(o.clients, planted);
    } else {
      for (int j = 0; j < o.clients; ++j)
        d.radii.push_back(j == victim ? planted : o.slack * qdist[j]);
    }
    return d;
  }
  if (o.uniform_radius) {
    Rat big = 0;
    for (int j = 0; j < o.clients; ++j) big = rat_max(big, qdist[j]);
    d.radii.assign(o.clients, o.slack * big);
  } else {
    for (int j = 0; j < o.clients; ++j)
      d.radii.push_back(zero_pin[j] ? Rat(0) : o.slack * qdist[j]);
  }
  return d;
}

std::string serialize(const GenOptions& o, const Draw& d, const std::string& feasible) {
  ordered_json doc;
  doc["facilities"] = ordered_json::array();
  for (int i = 0; i < o.facilities; ++i)
    doc["facilities"].push_back({{"id", "f" + std::to_string(i + 1)}, {"cost", d.costs[i]}});
  doc["clients"] = ordered_json::array();
  for (int j = 0; j < o.clients; ++j)
    doc["clients"].push_back({{"id", "c" + std::to_string(j + 1)},
                              {"radius", rat_to_string(d.radii[j])},
                              {"demand", d.demands[j]}});
  ordered_json points = ordered_json::object();
  for (int i = 0; i < o.facilities; ++i)
    points["f" + std::to_string(i + 1)] = d.fac_points[i];
  for (int j = 0; j < o.clients; ++j)
    points["c" + std::to_string(j + 1)] = d.client_points[j];
  doc["metric"] = {{"kind", "l1"}, {"points", points}};
  doc["matroid"] = d.matroid;
  doc["meta"] = {{"seed", o.seed},
                 {"feasible", feasible},
                 {"params",
                  {{"facilities", o.facilities},
                   {"clients", o.clients},
                   {"matroid", o.matroid},
                   {"q", o.q},
                   {"slack", rat_to_string(o.slack)},
                   {"uniform_radius", o.uniform_radius},
                   {"plant_infeasible", o.plant_infeasible},
                   {"grid", o.grid},
                   {"dims", o.dims}}}};
  return doc.dump(2) + "\n";
}

bool lp_feasible(const std::string& text) {
  Instance inst = instance_from_json_text(text);
  validate_instance_or_throw(inst);
  try {
    solve_relaxation(inst);
    return true;
  } catch (const InfeasibleError&) {
    return false;
  }
}

}  // namespace

std::string generate_instance_text(const GenOptions& o) {
  if (o.facilities < 1 || o.facilities > 30)
    throw ValidationError("facility count must be in [1, 30]");
  if (o.clients < 1) throw ValidationError("need at least one client");
  if (o.dims < 1 || o.grid < 1) throw ValidationError("grid and dims must be positive");
  if (o.slack < 0) throw ValidationError("slack must be nonnegative");
  Rng rng(o.seed);

  if (o.plant_infeasible) {
    std::string text = serialize(o, draw_once(o, rng), "no");
    check_internal(!lp_feasible(text), "planted-infeasible instance turned out feasible");
    return text;
  }
  if (!o.check_feasibility) return serialize(o, draw_once(o, rng), "unknown");
  std::string last;
  for (int attempt = 0; attempt < std::max(1, o.feasibility_attempts); ++attempt) {
    Draw d = draw_once(o, rng);
    std::string text = serialize(o, d, "lp");
    if (lp_feasible(text)) return text;
    last = serialize(o, d, "unknown");  // retry budget may run out; keep it tagged honestly
  }
  return last;
}

}  // namespace pmm
