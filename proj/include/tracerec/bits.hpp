#pragma once
// Packed binary strings. Source strings and traces share one representation
// but are distinct types so an API cannot silently accept one for the other.

#include <compare>
#include <cstddef>
#include <cstdint>
#include <span>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

namespace tracerec {

/// Longest string accepted at construction.
inline constexpr std::size_t kMaxStringLength = std::size_t{1} << 20;

/// Value returned for reads past the end of a string.
inline constexpr int kSentinelSymbol = 2;

/// Non-owning view over packed bits; bit j lives in word j/64 at position j%64.
class BitsView {
public:
  constexpr BitsView() = default;
  constexpr BitsView(const std::uint64_t* words, std::size_t size) : words_(words), size_(size) {}

  [[nodiscard]] constexpr std::size_t size() const noexcept { return size_; }
  [[nodiscard]] constexpr bool empty() const noexcept { return size_ == 0; }

  /// Bit at j; j must be in range.
  [[nodiscard]] int operator[](std::size_t j) const noexcept {
    return static_cast<int>((words_[j >> 6] >> (j & 63U)) & 1U);
  }

  /// Bit at j, or the sentinel 2 once j >= size().
  [[nodiscard]] int symbol(std::size_t j) const noexcept {
    return j < size_ ? (*this)[j] : kSentinelSymbol;
  }

private:
  const std::uint64_t* words_ = nullptr;
  std::size_t size_ = 0;
};

struct SourceTag {};
struct TraceTag {};

template <class Tag>
class BasicBits {
public:
  BasicBits() = default;

  /// Parses a string of '0'/'1' characters.
  explicit BasicBits(std::string_view text);

  static BasicBits from_bits(std::span<const std::uint8_t> bits);

  /// n-bit string whose character j is bit (n-1-j) of value, so numeric
  /// order of values equals lexicographic order of strings. Requires n <= 64.
  static BasicBits from_integer(std::uint64_t value, std::size_t n);

  [[nodiscard]] std::size_t size() const noexcept { return size_; }
  [[nodiscard]] bool empty() const noexcept { return size_ == 0; }
  [[nodiscard]] int operator[](std::size_t j) const noexcept { return view()[j]; }
  [[nodiscard]] int symbol(std::size_t j) const noexcept { return view().symbol(j); }

  void push_back(int bit);

  [[nodiscard]] BitsView view() const noexcept { return {words_.data(), size_}; }
  operator BitsView() const noexcept { return view(); }  // NOLINT(google-explicit-constructor)

  [[nodiscard]] std::span<const std::uint64_t> words() const noexcept { return words_; }
  [[nodiscard]] std::string to_string() const;
  [[nodiscard]] std::size_t count_ones() const noexcept;

  /// Inverse of from_integer; requires size() <= 64.
  [[nodiscard]] std::uint64_t to_integer() const;

  /// Shorter strings first, then lexicographic on the bits.
  friend std::strong_ordering operator<=>(const BasicBits& lhs, const BasicBits& rhs) noexcept {
    if (lhs.size_ != rhs.size_) return lhs.size_ <=> rhs.size_;
    for (std::size_t w = 0; w < lhs.words_.size(); ++w) {
      const std::uint64_t diff = lhs.words_[w] ^ rhs.words_[w];
      if (diff != 0) {
        const std::uint64_t low = diff & (~diff + 1);
        return (lhs.words_[w] & low) ? std::strong_ordering::greater : std::strong_ordering::less;
      }
    }
    return std::strong_ordering::equal;
  }
  friend bool operator==(const BasicBits& lhs, const BasicBits& rhs) noexcept {
    return lhs.size_ == rhs.size_ && lhs.words_ == rhs.words_;
  }

private:
  std::vector<std::uint64_t> words_;
  std::size_t size_ = 0;
};

using BitString = BasicBits<SourceTag>;
using Trace = BasicBits<TraceTag>;

extern template class BasicBits<SourceTag>;
extern template class BasicBits<TraceTag>;

/// Builds any bit type from any bit view, e.g. to pad a trace into a string.
template <class Out>
Out copy_bits(BitsView in) {
  Out out;
  for (std::size_t j = 0; j < in.size(); ++j) out.push_back(in[j]);
  return out;
}

/// Prefix of `zeros` zero bits followed by `in`.
template <class Out>
Out prepend_zeros(BitsView in, std::size_t zeros) {
  Out out;
  for (std::size_t j = 0; j < zeros; ++j) out.push_back(0);
  for (std::size_t j = 0; j < in.size(); ++j) out.push_back(in[j]);
  return out;
}

/// Malformed input text (bad character, over-long line, unreadable file).
class FormatError : public std::runtime_error {
public:
  using std::runtime_error::runtime_error;
};

/// One string per line; an empty line is an empty string. A trailing newline
/// does not introduce an extra entry.
std::vector<BitString> read_strings(const std::string& path);
std::vector<Trace> read_traces(const std::string& path);
void write_traces(const std::string& path, std::span<const Trace> traces);
std::vector<std::string> split_lines(std::string_view text);

}  // namespace tracerec
