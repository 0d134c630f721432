#ifndef LXT_LABEL_HPP_
#define LXT_LABEL_HPP_

#include <optional>
#include <string_view>

namespace lxt {

/// HOF: hate or offensive; NOT: neither.
enum class Label { HOF, NOT };

constexpr std::string_view to_string(Label l) { return l == Label::HOF ? "HOF" : "NOT"; }

/// Case-insensitive "HOF"/"NOT".
std::optional<Label> parse_label(std::string_view s);

constexpr int binary_target(Label l) { return l == Label::HOF ? 1 : 0; }

}  // namespace lxt

#endif  // LXT_LABEL_HPP_
