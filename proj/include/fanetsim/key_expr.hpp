#pragma once

#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

namespace fanetsim {

class KeyExprError : public std::invalid_argument {
public:
  using std::invalid_argument::invalid_argument;
};

/**
 * Hierarchical name made of `/`-separated chunks.
 *
 * A chunk is a non-empty run of [a-z0-9_-], or one of the wildcards `*`
 * (exactly one chunk) and `**` (zero or more chunks). Instances are always
 * normalized: adjacent `**` chunks are collapsed.
 */
class KeyExpr {
public:
  /// Parses and normalizes; throws KeyExprError on malformed input.
  static KeyExpr parse(std::string_view text);

  const std::vector<std::string>& chunks() const { return chunks_; }
  std::string str() const;
  bool is_concrete() const;

  bool operator==(const KeyExpr&) const = default;
  auto operator<=>(const KeyExpr&) const = default;

private:
  std::vector<std::string> chunks_;
};

/// Normalizes `text`; throws KeyExprError.
inline KeyExpr key_expr_normalize(std::string_view text) { return KeyExpr::parse(text); }

/// True iff `expr` matches the concrete `key`. Throws KeyExprError if `key`
/// contains wildcards.
bool key_expr_match(const KeyExpr& expr, const KeyExpr& key);

/// True iff some concrete key is matched by both expressions.
bool key_expr_intersects(const KeyExpr& a, const KeyExpr& b);

}  // namespace fanetsim
