#include "rdnsgeo/suffix_set.hpp"

#include <algorithm>
#include <fstream>
#include <stdexcept>
#include <vector>

#include "rdnsgeo/idna.hpp"
#include "rdnsgeo/serial.hpp"
#include "rdnsgeo/strings.hpp"

namespace rdnsgeo {

namespace {

std::string join_from(const std::vector<std::string>& labels, std::size_t start) {
  std::string out;
  for (std::size_t i = start; i < labels.size(); ++i) {
    if (i > start) out.push_back('.');
    out += labels[i];
  }
  return out;
}

}  // namespace

void SuffixSet::insert_forms(std::unordered_set<std::string>& set, std::string_view rule) {
  std::string ascii = to_lower_ascii(rule);
  set.insert(ascii);
  std::string unicode = to_unicode_hostname(ascii);
  if (unicode != ascii) set.insert(unicode);
}

void SuffixSet::add_rule(std::string_view line) {
  if (line.empty()) return;
  ++rule_count_;
  if (line[0] == '!') {
    insert_forms(exception_, line.substr(1));
  } else if (line.size() > 2 && line[0] == '*' && line[1] == '.') {
    insert_forms(wildcard_, line.substr(2));
  } else {
    insert_forms(exact_, line);
  }
}

SuffixSet::Match SuffixSet::match(std::string_view host) const {
  std::vector<std::string> labels = split(host, '.');
  for (std::size_t i = 0; i < labels.size(); ++i) {
    std::string cand = join_from(labels, i);
    if (exception_.count(cand)) {
      return Match{join_from(labels, i + 1), true};
    }
  }
  for (std::size_t i = 0; i < labels.size(); ++i) {
    std::string cand = join_from(labels, i);
    if (exact_.count(cand)) return Match{cand, true};
    if (i + 1 < labels.size()) {
      std::string parent = join_from(labels, i + 1);
      if (wildcard_.count(parent)) return Match{cand, true};
    }
  }
  return Match{labels.empty() ? std::string() : labels.back(), false};
}

std::optional<std::string> SuffixSet::registrable_domain(std::string_view host) const {
  Match m = match(host);
  if (!m.from_rule) return std::nullopt;
  if (host.size() <= m.suffix.size()) return std::nullopt;
  std::string_view rest = host.substr(0, host.size() - m.suffix.size());
  if (rest.back() != '.') return std::nullopt;
  rest.remove_suffix(1);
  std::size_t dot = rest.rfind('.');
  std::string_view label = dot == std::string_view::npos ? rest : rest.substr(dot + 1);
  if (label.empty()) return std::nullopt;
  return std::string(label) + "." + m.suffix;
}

void SuffixSet::save(std::ostream& out) const {
  BinaryWriter w(out);
  auto dump = [&w](const std::unordered_set<std::string>& set) {
    std::vector<std::string> sorted(set.begin(), set.end());
    std::sort(sorted.begin(), sorted.end());
    w.u32(static_cast<std::uint32_t>(sorted.size()));
    for (const auto& s : sorted) w.str(s);
  };
  w.u64(static_cast<std::uint64_t>(rule_count_));
  dump(exact_);
  dump(wildcard_);
  dump(exception_);
}

SuffixSet SuffixSet::load_binary(std::istream& in) {
  BinaryReader r(in);
  SuffixSet set;
  set.rule_count_ = static_cast<std::size_t>(r.u64());
  auto fill = [&r](std::unordered_set<std::string>& dst) {
    std::uint32_t n = r.u32();
    dst.reserve(n);
    for (std::uint32_t i = 0; i < n; ++i) dst.insert(r.str());
  };
  fill(set.exact_);
  fill(set.wildcard_);
  fill(set.exception_);
  return set;
}

SuffixSet load_public_suffixes(std::istream& in) {
  SuffixSet set;
  std::string line;
  while (std::getline(in, line)) {
    std::string_view v = trim(line);
    if (v.empty() || v.substr(0, 2) == "//") continue;
    std::size_t ws = v.find_first_of(" \t");
    if (ws != std::string_view::npos) v = v.substr(0, ws);
    if (!v.empty()) set.add_rule(v);
  }
  return set;
}

SuffixSet load_public_suffixes_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw std::runtime_error("cannot open public suffix list: " + path);
  return load_public_suffixes(in);
}

}  // namespace rdnsgeo
