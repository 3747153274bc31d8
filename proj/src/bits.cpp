#include "tracerec/bits.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <fstream>
#include <sstream>

#include "tracerec/strings.hpp"

namespace tracerec {

template <class Tag>
BasicBits<Tag>::BasicBits(std::string_view text) {
  if (text.size() > kMaxStringLength) {
    throw std::length_error("bit string longer than 2^20 characters");
  }
  words_.reserve((text.size() + 63) / 64);
  for (const char c : text) {
    if (c != '0' && c != '1') {
      throw FormatError(std::string("invalid character '") + c + "' in bit string");
    }
    push_back(c - '0');
  }
}

template <class Tag>
BasicBits<Tag> BasicBits<Tag>::from_bits(std::span<const std::uint8_t> bits) {
  if (bits.size() > kMaxStringLength) {
    throw std::length_error("bit string longer than 2^20 characters");
  }
  BasicBits out;
  for (const auto b : bits) {
    if (b > 1) throw std::invalid_argument("bit values must be 0 or 1");
    out.push_back(b);
  }
  return out;
}

template <class Tag>
BasicBits<Tag> BasicBits<Tag>::from_integer(std::uint64_t value, std::size_t n) {
  if (n > 64) throw std::invalid_argument("from_integer supports at most 64 bits");
  BasicBits out;
  for (std::size_t j = 0; j < n; ++j) out.push_back(static_cast<int>((value >> (n - 1 - j)) & 1U));
  return out;
}

template <class Tag>
std::uint64_t BasicBits<Tag>::to_integer() const {
  if (size_ > 64) throw std::invalid_argument("to_integer supports at most 64 bits");
  std::uint64_t v = 0;
  for (std::size_t j = 0; j < size_; ++j) v = (v << 1U) | static_cast<std::uint64_t>((*this)[j]);
  return v;
}

template <class Tag>
void BasicBits<Tag>::push_back(int bit) {
  if (size_ == kMaxStringLength) throw std::length_error("bit string longer than 2^20 characters");
  if ((size_ & 63U) == 0) words_.push_back(0);
  if (bit != 0) words_.back() |= std::uint64_t{1} << (size_ & 63U);
  ++size_;
}

template <class Tag>
std::string BasicBits<Tag>::to_string() const {
  std::string s(size_, '0');
  for (std::size_t j = 0; j < size_; ++j) s[j] = static_cast<char>('0' + (*this)[j]);
  return s;
}

template <class Tag>
std::size_t BasicBits<Tag>::count_ones() const noexcept {
  std::size_t c = 0;
  for (const auto w : words_) c += static_cast<std::size_t>(std::popcount(w));
  return c;
}

template class BasicBits<SourceTag>;
template class BasicBits<TraceTag>;

std::vector<std::string> split_lines(std::string_view text) {
  std::vector<std::string> lines;
  std::size_t start = 0;
  while (start < text.size()) {
    std::size_t end = text.find('\n', start);
    if (end == std::string_view::npos) end = text.size();
    std::string_view line = text.substr(start, end - start);
    if (!line.empty() && line.back() == '\r') line.remove_suffix(1);
    lines.emplace_back(line);
    start = end + 1;
  }
  return lines;
}

namespace {

std::string slurp(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw FormatError("cannot open '" + path + "'");
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

template <class T>
std::vector<T> read_lines_as(const std::string& path) {
  std::vector<T> out;
  std::size_t lineno = 0;
  for (const auto& line : split_lines(slurp(path))) {
    ++lineno;
    try {
      out.emplace_back(line);
    } catch (const std::exception& e) {
      throw FormatError(path + ":" + std::to_string(lineno) + ": " + e.what());
    }
  }
  return out;
}

}  // namespace

std::vector<BitString> read_strings(const std::string& path) { return read_lines_as<BitString>(path); }
std::vector<Trace> read_traces(const std::string& path) { return read_lines_as<Trace>(path); }

void write_traces(const std::string& path, std::span<const Trace> traces) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw FormatError("cannot write '" + path + "'");
  for (const auto& t : traces) out << t.to_string() << '\n';
}

// --- strings module ---------------------------------------------------------

std::uint64_t subsequence_count(BitsView w, BitsView x) {
  const std::size_t l = w.size();
  if (l > x.size()) return 0;
  // ways[i] = embeddings of w[0..i) into the prefix scanned so far.
  std::vector<std::uint64_t> ways(l + 1, 0);
  ways[0] = 1;
  for (std::size_t k = 0; k < x.size(); ++k) {
    const int c = x[k];
    for (std::size_t i = l; i >= 1; --i) {
      if (w[i - 1] == c && __builtin_add_overflow(ways[i], ways[i - 1], &ways[i])) {
        throw std::overflow_error("subsequence count exceeds 64 bits");
      }
    }
  }
  return ways[l];
}

double trace_probability(BitsView w, BitsView x, const ChannelParams& ch) {
  if (w.size() > x.size()) return 0.0;
  const auto f = subsequence_count(w, x);
  if (f == 0) return 0.0;
  return std::pow(ch.p(), static_cast<double>(w.size())) *
         std::pow(ch.q(), static_cast<double>(x.size() - w.size())) * static_cast<double>(f);
}

std::vector<std::size_t> occurrence_positions(BitsView x, BitsView w) {
  std::vector<std::size_t> out;
  const std::size_t l = w.size();
  if (l > x.size()) return out;
  if (l == 0) {
    for (std::size_t k = 0; k <= x.size(); ++k) out.push_back(k);
    return out;
  }
  // Knuth-Morris-Pratt.
  std::vector<std::size_t> border(l, 0);
  for (std::size_t i = 1, k = 0; i < l; ++i) {
    while (k > 0 && w[i] != w[k]) k = border[k - 1];
    if (w[i] == w[k]) ++k;
    border[i] = k;
  }
  for (std::size_t j = 0, k = 0; j < x.size(); ++j) {
    while (k > 0 && x[j] != w[k]) k = border[k - 1];
    if (x[j] == w[k]) ++k;
    if (k == l) {
      out.push_back(j + 1 - l);
      k = border[k - 1];
    }
  }
  return out;
}

bool is_d_separated(const std::vector<std::size_t>& positions, std::size_t d) {
  for (std::size_t i = 1; i < positions.size(); ++i) {
    if (positions[i] - positions[i - 1] < d) return false;
  }
  return true;
}

std::size_t first_difference(BitsView x, BitsView y) {
  const std::size_t n = std::min(x.size(), y.size());
  for (std::size_t i = 0; i < n; ++i) {
    if (x[i] != y[i]) return i;
  }
  return n;
}

}  // namespace tracerec
