#pragma once

// Independent reference implementations used by unit and acceptance tests.
// Deliberately naive: they must not share code paths with the library.

#include <cstddef>
#include <cstdint>
#include <queue>
#include <string>
#include <vector>

namespace fanetsim::oracle {

using Chunks = std::vector<std::string>;

inline Chunks split(const std::string& text)
{
  Chunks out;
  std::string cur;
  for (char c : text) {
    if (c == '/') {
      out.push_back(cur);
      cur.clear();
    } else {
      cur += c;
    }
  }
  out.push_back(cur);
  return out;
}

// Tries every alignment: each `**` is assigned every possible chunk count.
inline bool brute_match(const Chunks& expr, std::size_t ei, const Chunks& key, std::size_t ki)
{
  if (ei == expr.size()) return ki == key.size();
  const std::string& c = expr[ei];
  if (c == "**") {
    for (std::size_t take = 0; ki + take <= key.size(); ++take) {
      if (brute_match(expr, ei + 1, key, ki + take)) return true;
    }
    return false;
  }
  if (ki == key.size()) return false;
  if (c != "*" && c != key[ki]) return false;
  return brute_match(expr, ei + 1, key, ki + 1);
}

inline bool brute_match(const std::string& expr, const std::string& key)
{
  return brute_match(split(expr), 0, split(key), 0);
}

// Every expression of 1..max_len chunks over `alphabet`, textual form.
inline std::vector<std::string> enumerate(const std::vector<std::string>& alphabet, int max_len)
{
  std::vector<std::string> out;
  std::vector<std::string> layer{""};
  for (int len = 1; len <= max_len; ++len) {
    std::vector<std::string> next;
    for (const auto& prefix : layer) {
      for (const auto& c : alphabet) next.push_back(prefix.empty() ? c : prefix + "/" + c);
    }
    out.insert(out.end(), next.begin(), next.end());
    layer = std::move(next);
  }
  return out;
}

// Concrete universe for intersection witnesses: "c" never appears in the
// expressions, so it stands in for any chunk a `*` could bind.
inline const std::vector<std::string>& witness_keys()
{
  static const std::vector<std::string> keys = enumerate({"a", "b", "c"}, 6);
  return keys;
}

// Bit i set iff expr matches witness_keys()[i].
inline std::vector<bool> match_set(const std::string& expr)
{
  const auto& keys = witness_keys();
  const Chunks e = split(expr);
  std::vector<bool> bits(keys.size());
  for (std::size_t i = 0; i < keys.size(); ++i) bits[i] = brute_match(e, 0, split(keys[i]), 0);
  return bits;
}

inline bool sets_intersect(const std::vector<bool>& a, const std::vector<bool>& b)
{
  for (std::size_t i = 0; i < a.size(); ++i) {
    if (a[i] && b[i]) return true;
  }
  return false;
}

// Root of a decreasing function f on [lo, hi] with f(lo) >= 0 > f(hi).
template <typename F>
double bisect(F f, double lo, double hi, int iterations = 200)
{
  for (int i = 0; i < iterations; ++i) {
    const double mid = 0.5 * (lo + hi);
    (f(mid) >= 0.0 ? lo : hi) = mid;
  }
  return 0.5 * (lo + hi);
}

// Hop distance from `src` over an adjacency matrix; -1 when unreachable.
inline std::vector<int> bfs(const std::vector<std::vector<bool>>& adj, std::size_t src)
{
  std::vector<int> dist(adj.size(), -1);
  std::queue<std::size_t> q;
  dist[src] = 0;
  q.push(src);
  while (!q.empty()) {
    const auto u = q.front();
    q.pop();
    for (std::size_t v = 0; v < adj.size(); ++v) {
      if (adj[u][v] && dist[v] < 0) {
        dist[v] = dist[u] + 1;
        q.push(v);
      }
    }
  }
  return dist;
}

}  // namespace fanetsim::oracle
