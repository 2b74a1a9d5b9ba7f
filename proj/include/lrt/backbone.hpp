#pragma once

#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include "lrt/iodata.hpp"
#include "lrt/types.hpp"

namespace lrt {

struct BackboneNode {
  std::string label;
  std::string group;
  double in_strength = 0.0;  // sum of |weight| over retained incoming edges
  std::optional<double> response;
};

/// Edge j -> i carries rho_ij: the response of sector i to a shock in j.
struct BackboneEdge {
  std::size_t from = 0;
  std::size_t to = 0;
  double weight = 0.0;
  int sign = 1;
  double alpha = 1.0;  // min over the evaluated directions
  bool preserved = false;
};

struct BackboneGraph {
  std::vector<BackboneNode> nodes;
  std::vector<BackboneEdge> edges;  // sorted by (from, to)
  double p = 0.05;
  bool two_sided = true;
};

/// Disparity filter on |rho| without the diagonal. Out-direction alphas are
/// taken over each shock column, in-direction alphas over each response row;
/// `two_sided = false` evaluates the out-direction only. Edges of degree-1
/// nodes are kept and flagged. Throws InvalidP.
BackboneGraph disparity_filter(const Matrix& rho, double p, bool two_sided = true);

/// Attaches sector labels and groups, plus optional per-node response values.
void set_node_attributes(BackboneGraph& g, const std::vector<SectorId>& sectors,
                         const std::optional<Vector>& response = std::nullopt);

/// `edgelist` (from,to,weight,sign,alpha,preserved_flag) or `graphml`.
/// Throws UnsupportedFormat.
void export_graph(const BackboneGraph& g, const std::string& format, std::ostream& out);

}  // namespace lrt
