#include "lrt/backbone.hpp"

#include <cmath>
#include <ostream>

#include "lrt/error.hpp"
#include "lrt/textio.hpp"

namespace lrt {
namespace {

struct Disparity {
  double alpha = 1.0;
  bool preserved = false;
};

// Disparity of every nonzero off-diagonal edge along one node's edge list,
// given by `weight(e)` for e in 0..n-1 excluding `self`.
template <typename WeightFn>
std::vector<Disparity> node_disparity(std::size_t n, std::size_t self, WeightFn weight) {
  std::vector<Disparity> out(n);
  double strength = 0.0;
  int degree = 0;
  for (std::size_t e = 0; e < n; ++e) {
    if (e == self) continue;
    const double w = weight(e);
    if (w > 0.0) {
      strength += w;
      ++degree;
    }
  }
  for (std::size_t e = 0; e < n; ++e) {
    const double w = weight(e);
    if (e == self || !(w > 0.0)) continue;
    if (degree == 1) {
      out[e] = {0.0, true};
    } else {
      out[e].alpha = std::pow(1.0 - w / strength, degree - 1);
    }
  }
  return out;
}

std::string xml_escape(const std::string& s) {
  std::string out;
  for (char c : s) {
    switch (c) {
      case '&': out += "&amp;"; break;
      case '<': out += "&lt;"; break;
      case '>': out += "&gt;"; break;
      case '"': out += "&quot;"; break;
      default: out += c;
    }
  }
  return out;
}

}  // namespace

BackboneGraph disparity_filter(const Matrix& rho, double p, bool two_sided) {
  if (!(p > 0.0 && p < 1.0)) {
    throw Error(ErrorCode::InvalidP, "significance level must lie in (0, 1), got " + textio::fmt(p));
  }
  if (rho.rows() != rho.cols()) throw Error(ErrorCode::InvalidArgument, "matrix must be square");
  const auto n = static_cast<std::size_t>(rho.rows());
  auto w = [&](std::size_t i, std::size_t j) {
    return std::abs(rho(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j)));
  };

  // out[j][i]: edge j -> i seen from source j; in[i][j]: the same edge seen
  // from target i.
  std::vector<std::vector<Disparity>> out(n), in(n);
  for (std::size_t j = 0; j < n; ++j) {
    out[j] = node_disparity(n, j, [&](std::size_t i) { return w(i, j); });
  }
  for (std::size_t i = 0; i < n; ++i) {
    in[i] = node_disparity(n, i, [&](std::size_t j) { return w(i, j); });
  }

  BackboneGraph g;
  g.p = p;
  g.two_sided = two_sided;
  g.nodes.resize(n);
  for (std::size_t k = 0; k < n; ++k) g.nodes[k].label = std::to_string(k);
  for (std::size_t j = 0; j < n; ++j) {
    for (std::size_t i = 0; i < n; ++i) {
      if (i == j || !(w(i, j) > 0.0)) continue;
      const Disparity& o = out[j][i];
      const Disparity& d_in = in[i][j];
      const bool preserved = o.preserved || (two_sided && d_in.preserved);
      double alpha = o.alpha;
      if (two_sided) alpha = std::min(alpha, d_in.alpha);
      if (!(preserved || alpha < p)) continue;
      const double v = rho(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j));
      g.edges.push_back({j, i, v, v < 0.0 ? -1 : 1, alpha, preserved});
      g.nodes[i].in_strength += std::abs(v);
    }
  }
  return g;
}

void set_node_attributes(BackboneGraph& g, const std::vector<SectorId>& sectors,
                         const std::optional<Vector>& response) {
  if (sectors.size() != g.nodes.size() ||
      (response && static_cast<std::size_t>(response->size()) != g.nodes.size())) {
    throw Error(ErrorCode::InvalidArgument, "node attribute count does not match the graph");
  }
  for (std::size_t k = 0; k < sectors.size(); ++k) {
    g.nodes[k].label = sectors[k].code;
    g.nodes[k].group = sectors[k].group;
    if (response) g.nodes[k].response = (*response)(static_cast<Eigen::Index>(k));
  }
}

void export_graph(const BackboneGraph& g, const std::string& format, std::ostream& out) {
  if (format == "edgelist") {
    out << "from,to,weight,sign,alpha,preserved_flag\n";
    for (const auto& e : g.edges) {
      out << g.nodes[e.from].label << ',' << g.nodes[e.to].label << ',' << textio::fmt(e.weight)
          << ',' << e.sign << ',' << textio::fmt(e.alpha) << ',' << (e.preserved ? 1 : 0)
          << '\n';
    }
    return;
  }
  if (format != "graphml") {
    throw Error(ErrorCode::UnsupportedFormat, "unknown graph format '" + format + "'");
  }
  out << "<?xml version=\"1.0\" encoding=\"UTF-8\"?>\n"
      << "<graphml xmlns=\"http://graphml.graphdrawing.org/xmlns\">\n"
      << "  <key id=\"group\" for=\"node\" attr.name=\"group\" attr.type=\"string\"/>\n"
      << "  <key id=\"in_strength\" for=\"node\" attr.name=\"in_strength\" attr.type=\"double\"/>\n"
      << "  <key id=\"response\" for=\"node\" attr.name=\"response\" attr.type=\"double\"/>\n"
      << "  <key id=\"weight\" for=\"edge\" attr.name=\"weight\" attr.type=\"double\"/>\n"
      << "  <key id=\"sign\" for=\"edge\" attr.name=\"sign\" attr.type=\"int\"/>\n"
      << "  <key id=\"alpha\" for=\"edge\" attr.name=\"alpha\" attr.type=\"double\"/>\n"
      << "  <key id=\"preserved\" for=\"edge\" attr.name=\"preserved\" attr.type=\"boolean\"/>\n"
      << "  <graph id=\"backbone\" edgedefault=\"directed\">\n";
  for (const auto& node : g.nodes) {
    out << "    <node id=\"" << xml_escape(node.label) << "\">\n"
        << "      <data key=\"group\">" << xml_escape(node.group) << "</data>\n"
        << "      <data key=\"in_strength\">" << textio::fmt(node.in_strength) << "</data>\n";
    if (node.response) {
      out << "      <data key=\"response\">" << textio::fmt(*node.response) << "</data>\n";
    }
    out << "    </node>\n";
  }
  for (const auto& e : g.edges) {
    out << "    <edge source=\"" << xml_escape(g.nodes[e.from].label) << "\" target=\""
        << xml_escape(g.nodes[e.to].label) << "\">\n"
        << "      <data key=\"weight\">" << textio::fmt(e.weight) << "</data>\n"
        << "      <data key=\"sign\">" << e.sign << "</data>\n"
        << "      <data key=\"alpha\">" << textio::fmt(e.alpha) << "</data>\n"
        << "      <data key=\"preserved\">" << (e.preserved ? "true" : "false") << "</data>\n"
        << "    </edge>\n";
  }
  out << "  </graph>\n</graphml>\n";
}

}  // namespace lrt
