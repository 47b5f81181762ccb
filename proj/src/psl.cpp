#include "psl.hpp"

#include <algorithm>
#include <cctype>
#include <mutex>
#include <vector>

namespace seqnature {
namespace {

constexpr std::string_view kSnapshot =
#include "psl_snapshot.inc"
    ;

struct Rule {
  std::vector<std::string> labels;  // right-to-left order not applied; stored left-to-right
  bool exception = false;
};

std::vector<std::string> split_labels(std::string_view host) {
  std::vector<std::string> out;
  size_t start = 0;
  while (start <= host.size()) {
    size_t dot = host.find('.', start);
    if (dot == std::string_view::npos) {
      out.emplace_back(host.substr(start));
      break;
    }
    out.emplace_back(host.substr(start, dot - start));
    start = dot + 1;
  }
  return out;
}

const std::vector<Rule>& rules() {
  static const std::vector<Rule> parsed = [] {
    std::vector<Rule> out;
    std::string_view text = kSnapshot;
    size_t pos = 0;
    while (pos < text.size()) {
      size_t eol = text.find('\n', pos);
      std::string_view line = text.substr(
          pos, eol == std::string_view::npos ? std::string_view::npos : eol - pos);
      pos = eol == std::string_view::npos ? text.size() : eol + 1;
      while (!line.empty() && (line.back() == '\r' || line.back() == ' '))
        line.remove_suffix(1);
      if (line.empty() || line.starts_with("//")) continue;
      Rule r;
      if (line.front() == '!') {
        r.exception = true;
        line.remove_prefix(1);
      }
      r.labels = split_labels(line);
      if (!r.labels.empty()) out.push_back(std::move(r));
    }
    return out;
  }();
  return parsed;
}

// Right-anchored match; '*' matches exactly one label.
bool rule_matches(const Rule& r, const std::vector<std::string>& host) {
  if (r.labels.size() > host.size()) return false;
  for (size_t i = 0; i < r.labels.size(); ++i) {
    const std::string& rl = r.labels[r.labels.size() - 1 - i];
    const std::string& hl = host[host.size() - 1 - i];
    if (rl != "*" && rl != hl) return false;
  }
  return true;
}

}  // namespace

std::string_view public_suffix_snapshot() { return kSnapshot; }

std::optional<std::string> registrable_domain(std::string_view host) {
  std::string lower;
  lower.reserve(host.size());
  for (char c : host) lower.push_back(static_cast<char>(std::tolower(static_cast<unsigned char>(c))));
  if (!lower.empty() && lower.back() == '.') lower.pop_back();
  if (lower.empty()) return std::nullopt;

  std::vector<std::string> labels = split_labels(lower);
  for (const auto& l : labels)
    if (l.empty()) return std::nullopt;

  // Exception rules win outright; otherwise the longest matching rule,
  // falling back to the implicit "*" rule (bare TLDs are public suffixes).
  size_t suffix_len = 1;
  bool exception_hit = false;
  for (const Rule& r : rules()) {
    if (!rule_matches(r, labels)) continue;
    if (r.exception) {
      suffix_len = r.labels.size() - 1;
      exception_hit = true;
      break;
    }
    suffix_len = std::max(suffix_len, r.labels.size());
  }
  (void)exception_hit;

  if (labels.size() <= suffix_len) return std::nullopt;  // host is a public suffix
  std::string out;
  for (size_t i = labels.size() - suffix_len - 1; i < labels.size(); ++i) {
    if (!out.empty()) out.push_back('.');
    out += labels[i];
  }
  return out;
}

std::optional<std::string> esld_of(const DomainLabel& domain) {
  if (!domain.is_name()) return std::nullopt;
  return registrable_domain(domain.value);
}

}  // namespace seqnature
