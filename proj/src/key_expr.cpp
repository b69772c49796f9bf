#include "fanetsim/key_expr.hpp"

#include <algorithm>

namespace fanetsim {

namespace {

constexpr std::string_view kStar = "*";
constexpr std::string_view kDoubleStar = "**";

bool legal_literal(std::string_view chunk)
{
  return std::all_of(chunk.begin(), chunk.end(), [](char c) {
    return (c >= 'a' && c <= 'z') || (c >= '0' && c <= '9') || c == '_' || c == '-';
  });
}

bool is_wild(const std::string& c) { return c == kStar || c == kDoubleStar; }

}  // namespace

KeyExpr KeyExpr::parse(std::string_view text)
{
  if (text.empty()) throw KeyExprError("empty key expression");
  KeyExpr out;
  std::size_t pos = 0;
  while (true) {
    const std::size_t slash = text.find('/', pos);
    const std::string_view chunk = text.substr(pos, slash == std::string_view::npos ? text.npos : slash - pos);
    if (chunk.empty()) throw KeyExprError("empty chunk in key expression '" + std::string(text) + "'");
    if (chunk != kStar && chunk != kDoubleStar) {
      if (chunk.find('*') != std::string_view::npos)
        throw KeyExprError("chunk '" + std::string(chunk) + "' mixes wildcard and literal characters");
      if (!legal_literal(chunk))
        throw KeyExprError("illegal character in chunk '" + std::string(chunk) + "'");
    }
    if (!(chunk == kDoubleStar && !out.chunks_.empty() && out.chunks_.back() == kDoubleStar)) {
      out.chunks_.emplace_back(chunk);
    }
    if (slash == std::string_view::npos) break;
    pos = slash + 1;
  }
  return out;
}

std::string KeyExpr::str() const
{
  std::string s;
  for (std::size_t i = 0; i < chunks_.size(); ++i) {
    if (i != 0) s += '/';
    s += chunks_[i];
  }
  return s;
}

bool KeyExpr::is_concrete() const
{
  return std::none_of(chunks_.begin(), chunks_.end(), is_wild);
}

bool key_expr_match(const KeyExpr& expr, const KeyExpr& key)
{
  if (!key.is_concrete()) throw KeyExprError("key '" + key.str() + "' must not contain wildcards");
  const auto& e = expr.chunks();
  const auto& k = key.chunks();
  // reach[j]: expr prefix consumed so far can align with key prefix of length j.
  std::vector<char> reach(k.size() + 1, 0);
  reach[0] = 1;
  for (const auto& chunk : e) {
    std::vector<char> next(k.size() + 1, 0);
    if (chunk == kDoubleStar) {
      char any = 0;
      for (std::size_t j = 0; j <= k.size(); ++j) {
        any = static_cast<char>(any || reach[j]);
        next[j] = any;
      }
    } else {
      for (std::size_t j = 0; j < k.size(); ++j) {
        if (reach[j] && (chunk == kStar || chunk == k[j])) next[j + 1] = 1;
      }
    }
    reach.swap(next);
  }
  return reach[k.size()] != 0;
}

bool key_expr_intersects(const KeyExpr& a, const KeyExpr& b)
{
  const auto& x = a.chunks();
  const auto& y = b.chunks();
  const std::size_t n = x.size();
  const std::size_t m = y.size();
  // ok[i][j]: suffixes x[i..] and y[j..] share a concrete key.
  std::vector<std::vector<char>> ok(n + 1, std::vector<char>(m + 1, 0));
  for (std::size_t ii = n + 1; ii-- > 0;) {
    for (std::size_t jj = m + 1; jj-- > 0;) {
      char r = 0;
      if (ii == n && jj == m) {
        r = 1;
      } else if (ii < n && x[ii] == kDoubleStar) {
        r = static_cast<char>(ok[ii + 1][jj] || (jj < m && ok[ii][jj + 1]));
      } else if (jj < m && y[jj] == kDoubleStar) {
        r = static_cast<char>(ok[ii][jj + 1] || (ii < n && ok[ii + 1][jj]));
      } else if (ii < n && jj < m) {
        const bool compatible = x[ii] == kStar || y[jj] == kStar || x[ii] == y[jj];
        r = static_cast<char>(compatible && ok[ii + 1][jj + 1]);
      }
      ok[ii][jj] = r;
    }
  }
  return ok[0][0] != 0;
}

}  // namespace fanetsim
