#include "coarsekit/matching.hpp"

#include <algorithm>
#include <deque>
#include <limits>
#include <set>

namespace coarsekit {

namespace {

constexpr std::size_t kNone = std::numeric_limits<std::size_t>::max();

class HopcroftKarp {
 public:
  explicit HopcroftKarp(const SelectionProblem& p)
      : p_(p), match_left_(p.candidates.size(), kNone), match_right_(p.right_size, kNone),
        layer_(p.candidates.size()) {}

  std::size_t run() {
    std::size_t size = 0;
    while (bfs()) {
      for (std::size_t x = 0; x < match_left_.size(); ++x) {
        if (match_left_[x] == kNone && dfs(x)) ++size;
      }
    }
    return size;
  }

  const std::vector<std::size_t>& match_left() const { return match_left_; }
  const std::vector<std::size_t>& match_right() const { return match_right_; }

 private:
  bool bfs() {
    std::deque<std::size_t> queue;
    bool found = false;
    for (std::size_t x = 0; x < match_left_.size(); ++x) {
      if (match_left_[x] == kNone) {
        layer_[x] = 0;
        queue.push_back(x);
      } else {
        layer_[x] = kNone;
      }
    }
    while (!queue.empty()) {
      const auto x = queue.front();
      queue.pop_front();
      for (auto y : p_.candidates[x]) {
        const auto mate = match_right_[y];
        if (mate == kNone) {
          found = true;
        } else if (layer_[mate] == kNone) {
          layer_[mate] = layer_[x] + 1;
          queue.push_back(mate);
        }
      }
    }
    return found;
  }

  bool dfs(std::size_t x) {
    for (auto y : p_.candidates[x]) {
      const auto mate = match_right_[y];
      if (mate == kNone || (layer_[mate] == layer_[x] + 1 && dfs(mate))) {
        match_left_[x] = y;
        match_right_[y] = x;
        return true;
      }
    }
    layer_[x] = kNone;
    return false;
  }

  const SelectionProblem& p_;
  std::vector<std::size_t> match_left_;
  std::vector<std::size_t> match_right_;
  std::vector<std::size_t> layer_;
};

SelectionProblem normalized(const SelectionProblem& problem) {
  SelectionProblem p = problem;
  for (auto& c : p.candidates) {
    std::sort(c.begin(), c.end());
    c.erase(std::unique(c.begin(), c.end()), c.end());
    if (!c.empty() && c.back() >= p.right_size) {
      throw Error(ErrorKind::OutOfRange, "candidate " + std::to_string(c.back()) + " out of range");
    }
  }
  return p;
}

}  // namespace

bool is_valid_selection(const SelectionProblem& problem, const Selection& selection) {
  if (selection.size() != problem.candidates.size()) return false;
  std::vector<bool> used(problem.right_size, false);
  for (std::size_t x = 0; x < selection.size(); ++x) {
    const auto y = selection[x];
    if (y >= problem.right_size || used[y]) return false;
    const auto& c = problem.candidates[x];
    if (std::find(c.begin(), c.end(), y) == c.end()) return false;
    used[y] = true;
  }
  return true;
}

bool is_valid_certificate(const SelectionProblem& problem, const DeficiencyCertificate& cert) {
  std::set<std::size_t> joint;
  for (auto x : cert.left) {
    if (x >= problem.candidates.size()) return false;
    joint.insert(problem.candidates[x].begin(), problem.candidates[x].end());
  }
  return cert.left.size() > joint.size() && PointSet(joint.begin(), joint.end()) == cert.candidate_union;
}

SelectionResult injective_selection(const SelectionProblem& problem) {
  const auto p = normalized(problem);
  HopcroftKarp hk(p);
  const auto matched = hk.run();
  if (matched == p.candidates.size()) {
    Selection out = hk.match_left();
    if (!is_valid_selection(p, out)) throw Error(ErrorKind::MatchingFailed, "internal: invalid selection");
    return out;
  }

  // Alternating reachability from every uncovered left point.
  std::vector<bool> left_seen(p.candidates.size(), false), right_seen(p.right_size, false);
  std::deque<std::size_t> queue;
  for (std::size_t x = 0; x < p.candidates.size(); ++x) {
    if (hk.match_left()[x] == kNone) {
      left_seen[x] = true;
      queue.push_back(x);
    }
  }
  while (!queue.empty()) {
    const auto x = queue.front();
    queue.pop_front();
    for (auto y : p.candidates[x]) {
      if (right_seen[y]) continue;
      right_seen[y] = true;
      const auto mate = hk.match_right()[y];
      if (mate != kNone && !left_seen[mate]) {
        left_seen[mate] = true;
        queue.push_back(mate);
      }
    }
  }
  DeficiencyCertificate cert;
  for (std::size_t x = 0; x < left_seen.size(); ++x)
    if (left_seen[x]) cert.left.push_back(x);
  for (std::size_t y = 0; y < right_seen.size(); ++y)
    if (right_seen[y]) cert.candidate_union.push_back(y);
  if (!is_valid_certificate(p, cert)) throw Error(ErrorKind::MatchingFailed, "internal: invalid certificate");
  return cert;
}

std::variant<CoarseMap, DeficiencyCertificate> injectivize_selection(const CoarseMap& f, Dist r) {
  const auto& X = f.domain();
  SelectionProblem problem;
  problem.right_size = f.codomain().size();
  problem.candidates.resize(X.size());
  for (std::size_t x = 0; x < X.size(); ++x) {
    for (std::size_t z = 0; z < X.size(); ++z) {
      if (X.distance(x, z) <= r) problem.candidates[x].push_back(f(z));
    }
  }
  auto result = injective_selection(problem);
  if (auto* cert = std::get_if<DeficiencyCertificate>(&result)) return std::move(*cert);
  return CoarseMap(f.domain_ptr(), f.codomain_ptr(), std::get<Selection>(std::move(result)));
}

namespace {

SelectionProblem ball_problem(const CoarseMap& f, Dist s) {
  const auto& Y = f.codomain();
  SelectionProblem problem;
  problem.right_size = Y.size();
  problem.candidates.resize(f.domain().size());
  for (std::size_t x = 0; x < f.domain().size(); ++x) {
    for (std::size_t y = 0; y < Y.size(); ++y) {
      if (Y.distance(f(x), y) <= s) problem.candidates[x].push_back(y);
    }
  }
  return problem;
}

}  // namespace

MinimalInjectivization injectivize_minimal(const CoarseMap& f) {
  const auto& Y = f.codomain();
  if (f.domain().size() > Y.size()) {
    throw Error(ErrorKind::Impossible, "domain has " + std::to_string(f.domain().size()) +
                                           " points but codomain only " + std::to_string(Y.size()));
  }
  if (f.injective()) return {0, f};

  // Ball membership only changes at realized distances d(f x, y).
  std::vector<Dist> radii;
  for (std::size_t x = 0; x < f.domain().size(); ++x)
    for (std::size_t y = 0; y < Y.size(); ++y) radii.push_back(Y.distance(f(x), y));
  std::sort(radii.begin(), radii.end());
  radii.erase(std::unique(radii.begin(), radii.end()), radii.end());

  // Largest radius makes every ball the whole codomain, hence solvable.
  std::size_t lo = 0, hi = radii.size() - 1;
  while (lo < hi) {
    const auto mid = lo + (hi - lo) / 2;
    if (std::holds_alternative<Selection>(injective_selection(ball_problem(f, radii[mid])))) {
      hi = mid;
    } else {
      lo = mid + 1;
    }
  }
  auto final_result = injective_selection(ball_problem(f, radii[lo]));
  auto* sel = std::get_if<Selection>(&final_result);
  if (!sel) throw Error(ErrorKind::MatchingFailed, "no injective map at the largest realized radius");
  return {radii[lo], CoarseMap(f.domain_ptr(), f.codomain_ptr(), std::move(*sel))};
}

SelectionResult perfect_matching_pair(const FiniteSpace& X, const FiniteSpace& Y,
                                      std::span<const std::size_t> image, Dist r) {
  if (X.size() != Y.size()) {
    throw Error(ErrorKind::SizeMismatch, "perfect matching needs |X| = |Y|, got " + std::to_string(X.size()) +
                                             " and " + std::to_string(Y.size()));
  }
  if (image.size() != X.size()) throw Error(ErrorKind::InvalidInput, "one image per point of X is required");
  SelectionProblem problem;
  problem.right_size = Y.size();
  problem.candidates.resize(X.size());
  for (std::size_t x = 0; x < X.size(); ++x) {
    if (image[x] >= Y.size()) throw Error(ErrorKind::OutOfRange, "image point " + std::to_string(image[x]));
    for (std::size_t y = 0; y < Y.size(); ++y) {
      if (Y.distance(image[x], y) <= r) problem.candidates[x].push_back(y);
    }
  }
  return injective_selection(problem);
}

}  // namespace coarsekit
