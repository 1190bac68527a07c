#pragma once

#include <memory>
#include <string>
#include <vector>

#include "pmm/matroid.hpp"
#include "pmm/rational.hpp"

namespace pmm {

enum class MetricDataKind { Matrix, L1Points };

// Immutable pairwise distance table over all named points of an instance file
// (facilities first, then clients, in file order). Reduced instances share the
// table and keep their own point-index maps.
class DistanceTable {
 public:
  static std::shared_ptr<const DistanceTable> from_matrix(std::vector<std::vector<Rat>> rows);
  static std::shared_ptr<const DistanceTable> from_l1_points(std::vector<std::vector<Rat>> coords);

  int size() const { return n_; }
  const Rat& d(int p, int q) const { return dist_[static_cast<size_t>(p) * n_ + q]; }
  MetricDataKind kind() const { return kind_; }

  // Problems found by the metric axioms check: nonnegativity, zero diagonal,
  // symmetry, and (unless skipped) the O(n^3) triangle inequality sweep.
  // L1 tables satisfy all of these by construction and return an empty list.
  std::vector<std::string> check_axioms(bool skip_triangle) const;

 private:
  int n_ = 0;
  MetricDataKind kind_ = MetricDataKind::Matrix;
  std::vector<Rat> dist_;
};

struct Facility {
  std::string id;
  Rat open_cost;
};

struct Client {
  std::string id;
  Rat radius;
  Rat demand;  // defaults to 1 when absent in the file
};

struct Instance {
  std::vector<Facility> facilities;
  std::vector<Client> clients;
  std::shared_ptr<const DistanceTable> table;
  std::vector<int> fac_point;     // facility index -> table point
  std::vector<int> client_point;  // client index -> table point
  MatroidSpec matroid;

  int nf() const { return static_cast<int>(facilities.size()); }
  int nc() const { return static_cast<int>(clients.size()); }
  const Rat& dfc(int i, int j) const { return table->d(fac_point[i], client_point[j]); }
  const Rat& dcc(int j, int k) const { return table->d(client_point[j], client_point[k]); }
  const Rat& dff(int i, int h) const { return table->d(fac_point[i], fac_point[h]); }

  int facility_index(const std::string& id) const;  // -1 when unknown
  int client_index(const std::string& id) const;

  // Facilities sorted by (distance to client j, facility index).
  std::vector<int> facilities_by_distance(int j) const;
  // True when every client radius equals every other (needed by uniform mode).
  bool uniform_radii() const;
};

struct ValidationOptions {
  bool skip_triangle = false;
};

// Returns human-readable problems; empty means the instance is well-formed.
std::vector<std::string> validate_instance(const Instance& inst, const ValidationOptions& opts = {});
// Same, but throws ValidationError listing every problem.
void validate_instance_or_throw(const Instance& inst, const ValidationOptions& opts = {});

// JSON round trip (see README for the schema). Throws ParseError on malformed
// input; validation is separate.
Instance instance_from_json_text(const std::string& text);
Instance load_instance(const std::string& path);

}  // namespace pmm
