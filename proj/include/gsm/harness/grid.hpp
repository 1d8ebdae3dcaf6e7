#pragma once

// SNR grid syntax: "start:step:stop" (stop included when hit within 1e-9 of
// a step) or an explicit comma list "0,2.5,5".

#include <algorithm>
#include <charconv>
#include <cmath>
#include <cstdint>
#include <string>
#include <string_view>
#include <vector>

#include "gsm/error.hpp"

namespace gsm {

namespace detail {

inline std::string_view trim(std::string_view s) {
  while (!s.empty() && (s.front() == ' ' || s.front() == '\t')) s.remove_prefix(1);
  while (!s.empty() && (s.back() == ' ' || s.back() == '\t')) s.remove_suffix(1);
  return s;
}

inline double parse_real(std::string_view s, std::string_view what) {
  s = trim(s);
  double v = 0.0;
  const auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
  if (s.empty() || ec != std::errc{} || ptr != s.data() + s.size() || !std::isfinite(v)) {
    throw usage_error("bad number '" + std::string(s) + "' in " + std::string(what));
  }
  return v;
}

}  // namespace detail

inline std::vector<double> parse_snr_grid(std::string_view text) {
  std::vector<double> grid;
  if (text.find(':') != std::string_view::npos) {
    const auto a = text.find(':');
    const auto b = text.find(':', a + 1);
    if (b == std::string_view::npos || text.find(':', b + 1) != std::string_view::npos) {
      throw usage_error("SNR range must look like start:step:stop");
    }
    const double start = detail::parse_real(text.substr(0, a), "SNR range");
    const double step = detail::parse_real(text.substr(a + 1, b - a - 1), "SNR range");
    const double stop = detail::parse_real(text.substr(b + 1), "SNR range");
    if (!(step > 0.0)) throw usage_error("SNR step must be positive");
    if (stop < start) throw usage_error("SNR range stop is below start");
    const auto count = static_cast<std::uint64_t>(std::floor((stop - start) / step + 1e-9)) + 1;
    if (count > 100000) throw usage_error("SNR range has too many points");
    for (std::uint64_t k = 0; k < count; ++k) grid.push_back(start + static_cast<double>(k) * step);
  } else {
    std::size_t pos = 0;
    while (pos <= text.size()) {
      const auto comma = text.find(',', pos);
      const auto item = text.substr(pos, comma == std::string_view::npos ? std::string_view::npos : comma - pos);
      grid.push_back(detail::parse_real(item, "SNR list"));
      if (comma == std::string_view::npos) break;
      pos = comma + 1;
    }
  }
  if (grid.empty()) throw usage_error("SNR grid is empty");
  if (!std::is_sorted(grid.begin(), grid.end())) throw usage_error("SNR grid must be sorted ascending");
  return grid;
}

/// Comma list of positive integers, e.g. receive antenna counts.
inline std::vector<unsigned> parse_unsigned_list(std::string_view text, std::string_view what) {
  std::vector<unsigned> out;
  std::size_t pos = 0;
  while (pos <= text.size()) {
    const auto comma = text.find(',', pos);
    const auto item = detail::trim(text.substr(pos, comma == std::string_view::npos ? std::string_view::npos : comma - pos));
    unsigned v = 0;
    const auto [ptr, ec] = std::from_chars(item.data(), item.data() + item.size(), v);
    if (item.empty() || ec != std::errc{} || ptr != item.data() + item.size()) {
      throw usage_error("bad integer '" + std::string(item) + "' in " + std::string(what));
    }
    out.push_back(v);
    if (comma == std::string_view::npos) break;
    pos = comma + 1;
  }
  return out;
}

}  // namespace gsm
