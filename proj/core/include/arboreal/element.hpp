#pragma once

#include <map>
#include <memory>
#include <optional>
#include <random>
#include <string>
#include <vector>

#include "arboreal/local_group.hpp"
#include "arboreal/tree.hpp"

namespace arboreal {

using GroupPtr = std::shared_ptr<const LocalGroup>;

namespace detail {
struct Node;
using NodePtr = std::shared_ptr<const Node>;
}  // namespace detail

/// Thrown when a depth-certified operation runs out of its probe budget.
struct InsufficientDepth : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct RandomOptions {
  int max_root_length = 4;  // even root lengths 0..max
  int radius = 3;           // stored-entry radius
  double density = 0.6;     // chance a ball vertex gets an explicit entry
};

/// Element of U(F)+ acting on the colored d-regular tree.
///
/// A leaf stores the image of the base vertex plus finitely many local
/// permutations; at every other vertex the local permutation is the
/// lexicographically least element of F mapping the inbound color to the value
/// inherited from the parent (identity whenever the inherited value is the
/// inbound color itself). Composites and inverses are exact expression nodes,
/// so apply/local_perm are correct at every depth, not just inside a ball.
class Portrait {
 public:
  Portrait() = default;

  static Portrait identity(GroupPtr F);
  /// General leaf; validates reduction, evenness of the root image, membership
  /// of every entry in F, and parent/child edge-color compatibility.
  static Portrait leaf(GroupPtr F, const Vertex& root_image, const std::map<Vertex, Perm>& entries);
  /// Color-preserving translation v -> w * v (reduced concatenation).
  static Portrait left_mult(GroupPtr F, const Vertex& w);
  /// Rotation about x0 with prescribed local permutation there.
  static Portrait rotation(GroupPtr F, const Perm& sigma);
  /// Element of K mapping the path [x0, from] onto [x0, to] with lex-least
  /// choices. Throws if some step has no transporting permutation in F.
  static Portrait path_rotation(GroupPtr F, const Vertex& from, const Vertex& to);
  /// Hyperbolic translation taking edge e = (x0, c1) to e2 = (v, c), axis
  /// through both. Requires |v| even (throws "parity" otherwise), v starting
  /// with c1, and a permutation in F taking c1 to c.
  static Portrait build_hyperbolic(GroupPtr F, const Edge& e, const Edge& e2);
  static Portrait random(GroupPtr F, std::mt19937_64& rng, const RandomOptions& opts = {});

  bool valid() const { return node_ != nullptr; }
  const LocalGroup& group() const;
  GroupPtr group_ptr() const;

  Vertex apply(const Vertex& v) const;
  /// Local action at v: the star bijection color -> color induced at v.
  Perm local_perm(const Vertex& v) const;
  const Vertex& root_image() const;

  /// Max depth of explicitly stored structure (0 for pure translations).
  int support_bound() const;
  /// Depth beyond which behavior tokens are trustworthy for cycle detection.
  int token_depth() const;
  /// Finite-state fingerprint of the subtree behavior below v; equal tokens at
  /// aligned ray phases certify equal future behavior (valid for
  /// |v| > token_depth()).
  std::string token(const Vertex& v) const;

  bool is_leaf() const;
  /// Leaf accessors (serialization); throw for composite nodes.
  const std::map<Vertex, Perm>& leaf_entries() const;

  friend Portrait compose(const Portrait& a, const Portrait& b);  // a after b
  friend Portrait inverse(const Portrait& g);
  Portrait pow(int n) const;

  /// Structural serialization: leaves in the {root_image, entries, radius}
  /// JSON schema; composites as {"compose": [...]}/{"inverse": ...} trees.
  std::string to_json() const;
  static Portrait from_json(GroupPtr F, const std::string& json_text);

 private:
  explicit Portrait(detail::NodePtr n) : node_(std::move(n)) {}
  detail::NodePtr node_;
};

Portrait compose(const Portrait& a, const Portrait& b);
Portrait inverse(const Portrait& g);

/// Exact certificate for the behavior of g along the ray [x0, xi).
struct RayWalkResult {
  bool fixes_end = false;
  /// Busemann shift: g(ray_n) = ray_{n + shift} for all large n (fixes_end).
  int busemann_shift = 0;
  /// Agreement depth of g(xi) with xi (!fixes_end): dist from x0 of the last
  /// common vertex of [x0, g(xi)) and [x0, xi).
  int agreement = 0;
  /// End image g(xi), exact (always set; equals xi when fixes_end).
  std::optional<BoundaryPoint> image_end;
  int transient = 0;   // certified cycle starts here
  int cycle_length = 0;
};

/// Walks g along xi with token cycle detection. max_depth caps the walk
/// (throws InsufficientDepth when exhausted before certification).
RayWalkResult ray_walk(const Portrait& g, const BoundaryPoint& xi, int max_depth = 0);

/// Does g fix the end xi? certify_depth overrides the default walk cap.
bool fixes_boundary_point(const Portrait& g, const BoundaryPoint& xi, int certify_depth = 0);

enum class IsometryKind { Elliptic, Hyperbolic };

struct Classification {
  IsometryKind kind = IsometryKind::Elliptic;
  int translation_length = 0;
  /// Fixed vertex (elliptic) or axis vertex (hyperbolic) closest to x0.
  Vertex min_vertex;
  /// Ends of the axis, exact when the periodicity certificate succeeded.
  std::optional<BoundaryPoint> attracting;
  std::optional<BoundaryPoint> repelling;
  std::string attracting_prefix;  // probe prefix, always populated (hyperbolic)
  std::string repelling_prefix;
  bool directions_exact = false;
};

/// Probes displacement within the ball of radius probe_depth; gradient descent
/// from x0 to the displacement minimum (convexity makes the local minimum
/// global). Requires probe_depth >= dist(x0, g(x0)) + 2.
Classification classify(const Portrait& g, int probe_depth);

/// classify with a generous default probe.
Classification classify(const Portrait& g);

}  // namespace arboreal
