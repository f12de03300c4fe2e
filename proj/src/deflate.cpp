// Copyright 2026 The GreenStore Authors.
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include "greenstore/deflate.hpp"

#include <algorithm>
#include <array>
#include <numeric>
#include <queue>

#include "greenstore/error.hpp"

namespace greenstore {
namespace {

constexpr std::array<std::uint16_t, 29> kLengthBase = {3,  4,  5,  6,  7,  8,  9,  10, 11,  13,
                                                       15, 17, 19, 23, 27, 31, 35, 43, 51,  59,
                                                       67, 83, 99, 115, 131, 163, 195, 227, 258};
constexpr std::array<std::uint8_t, 29> kLengthExtra = {0, 0, 0, 0, 0, 0, 0, 0, 1, 1, 1, 1, 2, 2, 2,
                                                       2, 3, 3, 3, 3, 4, 4, 4, 4, 5, 5, 5, 5, 0};
constexpr std::array<std::uint16_t, 30> kDistBase = {
    1,   2,   3,   4,   5,   7,    9,    13,   17,   25,   33,   49,   65,    97,    129,
    193, 257, 385, 513, 769, 1025, 1537, 2049, 3073, 4097, 6145, 8193, 12289, 16385, 24577};
constexpr std::array<std::uint8_t, 30> kDistExtra = {0, 0, 0, 0, 1, 1, 2, 2,  3,  3,  4,  4,  5,  5,  6,
                                                     6, 7, 7, 8, 8, 9, 9, 10, 10, 11, 11, 12, 12, 13, 13};
constexpr std::array<std::uint8_t, 19> kCodeLengthOrder = {16, 17, 18, 0, 8,  7, 9,  6, 10, 5,
                                                           11, 4,  12, 3, 13, 2, 14, 1, 15};

constexpr std::size_t kNumLitLen = 286;
constexpr std::size_t kNumDist = 30;
constexpr std::size_t kWindow = 32768;
constexpr std::size_t kMinMatch = 3;
constexpr std::size_t kMaxMatch = 258;

int length_symbol(std::size_t len) {
  // Index into kLengthBase; symbol is 257 + index.
  auto it = std::upper_bound(kLengthBase.begin(), kLengthBase.end(), len);
  return static_cast<int>(it - kLengthBase.begin()) - 1;
}

int dist_symbol(std::size_t dist) {
  auto it = std::upper_bound(kDistBase.begin(), kDistBase.end(), dist);
  return static_cast<int>(it - kDistBase.begin()) - 1;
}

std::uint32_t reverse_bits(std::uint32_t code, int len) {
  std::uint32_t r = 0;
  for (int i = 0; i < len; ++i) {
    r = (r << 1) | (code & 1u);
    code >>= 1;
  }
  return r;
}

// ---------------------------------------------------------------------------
// Huffman code construction

std::vector<std::uint8_t> huffman_lengths(std::span<const std::uint32_t> freq, int max_bits) {
  const std::size_t n = freq.size();
  std::vector<std::uint8_t> lengths(n, 0);
  std::vector<std::size_t> used;
  for (std::size_t s = 0; s < n; ++s)
    if (freq[s] > 0) used.push_back(s);

  // A decodable code needs two codewords; pad with the lowest unused symbols.
  for (std::size_t s = 0; used.size() < 2 && s < n; ++s)
    if (freq[s] == 0 && std::find(used.begin(), used.end(), s) == used.end()) used.push_back(s);
  if (used.size() == 2) {
    lengths[used[0]] = lengths[used[1]] = 1;
    return lengths;
  }

  // Plain Huffman tree over the used symbols to obtain depths.
  struct Node {
    std::uint64_t weight;
    std::size_t order;
    int left = -1, right = -1;
  };
  std::vector<Node> nodes;
  nodes.reserve(used.size() * 2);
  using Entry = std::pair<std::uint64_t, std::size_t>;  // (weight, node index)
  std::priority_queue<Entry, std::vector<Entry>, std::greater<>> heap;
  for (std::size_t s : used) {
    nodes.push_back({std::max<std::uint64_t>(freq[s], 1), nodes.size()});
    heap.emplace(nodes.back().weight, nodes.size() - 1);
  }
  while (heap.size() > 1) {
    auto [wa, a] = heap.top();
    heap.pop();
    auto [wb, b] = heap.top();
    heap.pop();
    nodes.push_back({wa + wb, nodes.size(), static_cast<int>(a), static_cast<int>(b)});
    heap.emplace(wa + wb, nodes.size() - 1);
  }
  std::vector<int> depth(nodes.size(), 0);
  for (std::size_t i = nodes.size(); i-- > 0;) {
    if (nodes[i].left >= 0) {
      depth[static_cast<std::size_t>(nodes[i].left)] = depth[i] + 1;
      depth[static_cast<std::size_t>(nodes[i].right)] = depth[i] + 1;
    }
  }

  // Histogram of code lengths, clamped to max_bits, then repaired so the
  // Kraft sum is exactly one.
  std::vector<std::uint32_t> count(64, 0);
  for (std::size_t i = 0; i < used.size(); ++i) ++count[static_cast<std::size_t>(std::min(depth[i], 63))];
  for (std::size_t l = static_cast<std::size_t>(max_bits) + 1; l < count.size(); ++l) {
    count[static_cast<std::size_t>(max_bits)] += count[l];
    count[l] = 0;
  }
  std::uint64_t total = 0;
  for (int l = max_bits; l > 0; --l) total += std::uint64_t{count[static_cast<std::size_t>(l)]} << (max_bits - l);
  const std::uint64_t target = std::uint64_t{1} << max_bits;
  while (total > target) {
    --count[static_cast<std::size_t>(max_bits)];
    for (int l = max_bits - 1; l > 0; --l) {
      if (count[static_cast<std::size_t>(l)] != 0) {
        --count[static_cast<std::size_t>(l)];
        count[static_cast<std::size_t>(l) + 1] += 2;
        break;
      }
    }
    --total;
  }

  // Hand the shortest lengths to the most frequent symbols.
  std::vector<std::size_t> by_freq = used;
  std::stable_sort(by_freq.begin(), by_freq.end(),
                   [&](std::size_t a, std::size_t b) { return freq[a] > freq[b]; });
  std::size_t k = 0;
  for (int l = 1; l <= max_bits; ++l)
    for (std::uint32_t c = 0; c < count[static_cast<std::size_t>(l)]; ++c)
      lengths[by_freq[k++]] = static_cast<std::uint8_t>(l);
  return lengths;
}

/// Canonical codes, already bit-reversed for LSB-first emission.
std::vector<std::uint16_t> canonical_codes(std::span<const std::uint8_t> lengths) {
  std::array<std::uint32_t, 16> bl_count{};
  for (auto l : lengths) ++bl_count[l];
  bl_count[0] = 0;
  std::array<std::uint32_t, 16> next{};
  std::uint32_t code = 0;
  for (std::size_t bits = 1; bits < 16; ++bits) {
    code = (code + bl_count[bits - 1]) << 1;
    next[bits] = code;
  }
  std::vector<std::uint16_t> codes(lengths.size(), 0);
  for (std::size_t s = 0; s < lengths.size(); ++s)
    if (lengths[s] != 0)
      codes[s] = static_cast<std::uint16_t>(reverse_bits(next[lengths[s]]++, lengths[s]));
  return codes;
}

std::array<std::uint8_t, 288> fixed_litlen_lengths() {
  std::array<std::uint8_t, 288> l{};
  for (std::size_t i = 0; i < 144; ++i) l[i] = 8;
  for (std::size_t i = 144; i < 256; ++i) l[i] = 9;
  for (std::size_t i = 256; i < 280; ++i) l[i] = 7;
  for (std::size_t i = 280; i < 288; ++i) l[i] = 8;
  return l;
}

// ---------------------------------------------------------------------------
// Encoder

class BitWriter {
 public:
  void put(std::uint32_t bits, int count) {
    acc_ |= std::uint64_t{bits} << fill_;
    fill_ += count;
    while (fill_ >= 8) {
      out_.push_back(static_cast<std::uint8_t>(acc_));
      acc_ >>= 8;
      fill_ -= 8;
    }
  }
  void align() {
    if (fill_ > 0) put(0, 8 - fill_);
  }
  void bytes(std::span<const std::uint8_t> b) { out_.insert(out_.end(), b.begin(), b.end()); }
  std::vector<std::uint8_t> finish() {
    align();
    return std::move(out_);
  }

 private:
  std::vector<std::uint8_t> out_;
  std::uint64_t acc_ = 0;
  int fill_ = 0;
};

struct Token {
  std::uint16_t value;  // literal byte, or match length when dist != 0
  std::uint16_t dist;
};

struct EffortProfile {
  std::size_t good_length;
  std::size_t max_lazy;
  std::size_t nice_length;
  std::size_t max_chain;
  bool lazy;
};

EffortProfile profile_for(int effort) {
  static constexpr std::array<EffortProfile, 9> table = {{
      {4, 4, 8, 4, false},
      {4, 5, 16, 8, false},
      {4, 6, 32, 32, false},
      {4, 4, 16, 16, true},
      {8, 16, 32, 32, true},
      {8, 16, 128, 128, true},
      {8, 32, 128, 256, true},
      {32, 128, 258, 1024, true},
      {32, 258, 258, 4096, true},
  }};
  return table[static_cast<std::size_t>(std::clamp(effort, 1, 9) - 1)];
}

class MatchFinder {
 public:
  explicit MatchFinder(std::span<const std::uint8_t> data)
      : data_(data), head_(kHashSize, -1), prev_(kWindow, -1) {}

  void insert(std::size_t pos) {
    if (pos + kMinMatch > data_.size()) return;
    const std::size_t h = hash(pos);
    prev_[pos & (kWindow - 1)] = head_[h];
    head_[h] = static_cast<std::int32_t>(pos);
  }

  struct Match {
    std::size_t length = 0;
    std::size_t dist = 0;
  };

  Match find(std::size_t pos, std::size_t prev_length, const EffortProfile& prof) const {
    Match best;
    if (pos + kMinMatch > data_.size()) return best;
    const std::size_t max_len = std::min(kMaxMatch, data_.size() - pos);
    if (prev_length >= max_len) return best;
    std::size_t chain = prev_length >= prof.good_length ? prof.max_chain / 4 + 1 : prof.max_chain;
    best.length = std::max<std::size_t>(prev_length, kMinMatch - 1);
    const long long limit = static_cast<long long>(pos) - static_cast<long long>(kWindow);
    std::int32_t cand = head_[hash(pos)];
    const std::uint8_t* cur = data_.data() + pos;
    std::size_t found = 0;
    while (cand >= 0 && cand > limit && chain-- > 0) {
      const std::uint8_t* c = data_.data() + cand;
      if (c[best.length] == cur[best.length] && c[0] == cur[0] && c[1] == cur[1]) {
        std::size_t len = 2;
        while (len < max_len && c[len] == cur[len]) ++len;
        if (len > best.length) {
          best.length = len;
          best.dist = pos - static_cast<std::size_t>(cand);
          found = len;
          if (len >= prof.nice_length || len == max_len) break;
        }
      }
      const std::int32_t next = prev_[static_cast<std::size_t>(cand) & (kWindow - 1)];
      if (next >= cand) break;
      cand = next;
    }
    if (found < kMinMatch) return {};
    return best;
  }

 private:
  static constexpr std::size_t kHashBits = 15;
  static constexpr std::size_t kHashSize = std::size_t{1} << kHashBits;

  std::size_t hash(std::size_t pos) const {
    const std::uint32_t v = (std::uint32_t{data_[pos]} << 16) | (std::uint32_t{data_[pos + 1]} << 8) |
                            data_[pos + 2];
    return (v * 2654435761u) >> (32 - kHashBits);
  }

  std::span<const std::uint8_t> data_;
  std::vector<std::int32_t> head_;
  std::vector<std::int32_t> prev_;
};

std::vector<Token> tokenize(std::span<const std::uint8_t> data, const EffortProfile& prof) {
  std::vector<Token> tokens;
  tokens.reserve(data.size() / 2 + 16);
  MatchFinder finder(data);
  const std::size_t n = data.size();
  auto literal = [&](std::size_t i) { tokens.push_back({data[i], 0}); };
  auto match = [&](std::size_t len, std::size_t dist) {
    tokens.push_back({static_cast<std::uint16_t>(len), static_cast<std::uint16_t>(dist)});
  };

  if (!prof.lazy) {
    std::size_t i = 0;
    while (i < n) {
      const auto m = finder.find(i, 0, prof);
      if (m.length >= kMinMatch) {
        match(m.length, m.dist);
        for (std::size_t j = 0; j < m.length; ++j) finder.insert(i + j);
        i += m.length;
      } else {
        literal(i);
        finder.insert(i);
        ++i;
      }
    }
    return tokens;
  }

  MatchFinder::Match prev;
  bool have_prev = false;
  std::size_t i = 0;
  while (i < n) {
    MatchFinder::Match cur;
    if (!(have_prev && prev.length >= prof.max_lazy)) cur = finder.find(i, have_prev ? prev.length : 0, prof);
    finder.insert(i);
    if (have_prev) {
      if (prev.length >= kMinMatch && cur.length <= prev.length) {
        match(prev.length, prev.dist);
        const std::size_t end = i - 1 + prev.length;
        for (std::size_t j = i + 1; j < end; ++j) finder.insert(j);
        i = end;
        have_prev = false;
        continue;
      }
      literal(i - 1);
    }
    prev = cur;
    have_prev = true;
    ++i;
  }
  if (have_prev) {
    if (prev.length >= kMinMatch)
      match(prev.length, prev.dist);
    else
      literal(n - 1);
  }
  return tokens;
}

struct CodeLengthRun {
  std::uint8_t symbol;
  std::uint8_t extra;
};

std::vector<CodeLengthRun> rle_code_lengths(std::span<const std::uint8_t> lens) {
  std::vector<CodeLengthRun> out;
  std::size_t i = 0;
  while (i < lens.size()) {
    const std::uint8_t v = lens[i];
    std::size_t run = 1;
    while (i + run < lens.size() && lens[i + run] == v) ++run;
    i += run;
    if (v == 0) {
      while (run >= 11) {
        const std::size_t r = std::min<std::size_t>(run, 138);
        out.push_back({18, static_cast<std::uint8_t>(r - 11)});
        run -= r;
      }
      if (run >= 3) {
        out.push_back({17, static_cast<std::uint8_t>(run - 3)});
        run = 0;
      }
    } else {
      out.push_back({v, 0});
      --run;
      while (run >= 3) {
        const std::size_t r = std::min<std::size_t>(run, 6);
        out.push_back({16, static_cast<std::uint8_t>(r - 3)});
        run -= r;
      }
    }
    for (; run > 0; --run) out.push_back({v, 0});
  }
  return out;
}

constexpr std::array<int, 19> kCodeLengthExtraBits = {0, 0, 0, 0, 0, 0, 0, 0, 0, 0,
                                                      0, 0, 0, 0, 0, 0, 2, 3, 7};

void write_tokens(BitWriter& bw, std::span<const Token> tokens, std::span<const std::uint8_t> ll_len,
                  std::span<const std::uint16_t> ll_code, std::span<const std::uint8_t> d_len,
                  std::span<const std::uint16_t> d_code) {
  for (const Token& t : tokens) {
    if (t.dist == 0) {
      bw.put(ll_code[t.value], ll_len[t.value]);
      continue;
    }
    const int ls = length_symbol(t.value);
    bw.put(ll_code[257 + static_cast<std::size_t>(ls)], ll_len[257 + static_cast<std::size_t>(ls)]);
    if (kLengthExtra[static_cast<std::size_t>(ls)])
      bw.put(t.value - kLengthBase[static_cast<std::size_t>(ls)], kLengthExtra[static_cast<std::size_t>(ls)]);
    const int ds = dist_symbol(t.dist);
    bw.put(d_code[static_cast<std::size_t>(ds)], d_len[static_cast<std::size_t>(ds)]);
    if (kDistExtra[static_cast<std::size_t>(ds)])
      bw.put(t.dist - kDistBase[static_cast<std::size_t>(ds)], kDistExtra[static_cast<std::size_t>(ds)]);
  }
  bw.put(ll_code[256], ll_len[256]);
}

void write_block(BitWriter& bw, std::span<const Token> tokens, std::span<const std::uint8_t> raw, bool last) {
  std::array<std::uint32_t, kNumLitLen> ll_freq{};
  std::array<std::uint32_t, kNumDist> d_freq{};
  std::uint64_t extra_bits = 0;
  for (const Token& t : tokens) {
    if (t.dist == 0) {
      ++ll_freq[t.value];
    } else {
      const auto ls = static_cast<std::size_t>(length_symbol(t.value));
      const auto ds = static_cast<std::size_t>(dist_symbol(t.dist));
      ++ll_freq[257 + ls];
      ++d_freq[ds];
      extra_bits += kLengthExtra[ls] + kDistExtra[ds];
    }
  }
  ll_freq[256] = 1;

  // Dynamic code.
  const auto ll_len = huffman_lengths(ll_freq, 15);
  const auto d_len = huffman_lengths(d_freq, 15);
  std::size_t hlit = kNumLitLen;
  while (hlit > 257 && ll_len[hlit - 1] == 0) --hlit;
  std::size_t hdist = kNumDist;
  while (hdist > 1 && d_len[hdist - 1] == 0) --hdist;
  std::vector<std::uint8_t> all_lens(ll_len.begin(), ll_len.begin() + static_cast<std::ptrdiff_t>(hlit));
  all_lens.insert(all_lens.end(), d_len.begin(), d_len.begin() + static_cast<std::ptrdiff_t>(hdist));
  const auto runs = rle_code_lengths(all_lens);
  std::array<std::uint32_t, 19> cl_freq{};
  for (const auto& r : runs) ++cl_freq[r.symbol];
  const auto cl_len = huffman_lengths(cl_freq, 7);
  std::size_t hclen = 19;
  while (hclen > 4 && cl_len[kCodeLengthOrder[hclen - 1]] == 0) --hclen;

  std::uint64_t dynamic_bits = 3 + 5 + 5 + 4 + 3 * hclen + extra_bits;
  for (const auto& r : runs)
    dynamic_bits += cl_len[r.symbol] + static_cast<std::uint64_t>(kCodeLengthExtraBits[r.symbol]);
  for (std::size_t s = 0; s < kNumLitLen; ++s) dynamic_bits += std::uint64_t{ll_freq[s]} * ll_len[s];
  for (std::size_t s = 0; s < kNumDist; ++s) dynamic_bits += std::uint64_t{d_freq[s]} * d_len[s];

  static const auto fixed_ll = fixed_litlen_lengths();
  std::uint64_t fixed_bits = 3 + extra_bits;
  for (std::size_t s = 0; s < kNumLitLen; ++s) fixed_bits += std::uint64_t{ll_freq[s]} * fixed_ll[s];
  for (std::size_t s = 0; s < kNumDist; ++s) fixed_bits += std::uint64_t{d_freq[s]} * 5;

  const std::size_t stored_chunks = std::max<std::size_t>(1, (raw.size() + 65534) / 65535);
  const std::uint64_t stored_bits = 8 * (raw.size() + 5 * stored_chunks) + 10;

  if (stored_bits <= dynamic_bits && stored_bits <= fixed_bits) {
    std::size_t off = 0;
    do {
      const std::size_t len = std::min<std::size_t>(65535, raw.size() - off);
      const bool final_chunk = off + len == raw.size();
      bw.put(last && final_chunk ? 1 : 0, 1);
      bw.put(0, 2);
      bw.align();
      bw.put(static_cast<std::uint32_t>(len), 16);
      bw.put(static_cast<std::uint32_t>(~len & 0xFFFF), 16);
      bw.bytes(raw.subspan(off, len));
      off += len;
    } while (off < raw.size());
    return;
  }

  if (fixed_bits <= dynamic_bits) {
    static const auto fixed_ll_code = canonical_codes(fixed_ll);
    static const std::array<std::uint8_t, 32> fixed_d = [] {
      std::array<std::uint8_t, 32> a{};
      a.fill(5);
      return a;
    }();
    static const auto fixed_d_code = canonical_codes(fixed_d);
    bw.put(last ? 1 : 0, 1);
    bw.put(1, 2);
    write_tokens(bw, tokens, fixed_ll, fixed_ll_code, fixed_d, fixed_d_code);
    return;
  }

  bw.put(last ? 1 : 0, 1);
  bw.put(2, 2);
  bw.put(static_cast<std::uint32_t>(hlit - 257), 5);
  bw.put(static_cast<std::uint32_t>(hdist - 1), 5);
  bw.put(static_cast<std::uint32_t>(hclen - 4), 4);
  for (std::size_t i = 0; i < hclen; ++i) bw.put(cl_len[kCodeLengthOrder[i]], 3);
  const auto cl_code = canonical_codes(cl_len);
  for (const auto& r : runs) {
    bw.put(cl_code[r.symbol], cl_len[r.symbol]);
    if (kCodeLengthExtraBits[r.symbol]) bw.put(r.extra, kCodeLengthExtraBits[r.symbol]);
  }
  write_tokens(bw, tokens, ll_len, canonical_codes(ll_len), d_len, canonical_codes(d_len));
}

// ---------------------------------------------------------------------------
// Decoder

class BitReader {
 public:
  explicit BitReader(std::span<const std::uint8_t> in) : in_(in) {}

  void need(int count) {
    while (fill_ < count) {
      const std::uint64_t byte = pos_ < in_.size() ? in_[pos_] : 0;
      if (pos_ >= in_.size()) ++overrun_;
      ++pos_;
      acc_ |= byte << fill_;
      fill_ += 8;
    }
  }
  std::uint32_t peek(int count) {
    need(count);
    return static_cast<std::uint32_t>(acc_ & ((std::uint64_t{1} << count) - 1));
  }
  void consume(int count) {
    acc_ >>= count;
    fill_ -= count;
    check();
  }
  std::uint32_t bits(int count) {
    if (count == 0) return 0;
    const std::uint32_t v = peek(count);
    consume(count);
    return v;
  }
  void align() { consume(fill_ % 8); }
  std::uint8_t byte() { return static_cast<std::uint8_t>(bits(8)); }
  // Bytes fully consumed so far, counting buffered whole bytes as unread.
  std::size_t byte_position() const { return pos_ - static_cast<std::size_t>(fill_ / 8); }

 private:
  void check() const {
    // Zero padding fed past the end is fine until it is actually consumed.
    if (overrun_ > 0 && pos_ * 8 - static_cast<std::size_t>(fill_) > in_.size() * 8)
      throw Error(ErrorCode::CorruptInput, "deflate stream truncated");
  }

  std::span<const std::uint8_t> in_;
  std::size_t pos_ = 0;
  std::uint64_t acc_ = 0;
  int fill_ = 0;
  std::size_t overrun_ = 0;
};

class HuffmanDecoder {
 public:
  explicit HuffmanDecoder(std::span<const std::uint8_t> lengths) {
    max_len_ = 0;
    for (auto l : lengths) max_len_ = std::max<int>(max_len_, l);
    if (max_len_ == 0) {
      max_len_ = 1;
      table_.assign(2, Entry{});
      return;
    }
    std::array<std::uint32_t, 16> bl_count{};
    for (auto l : lengths) ++bl_count[l];
    bl_count[0] = 0;
    long long left = 1;
    for (int l = 1; l <= 15; ++l) {
      left = left * 2 - bl_count[static_cast<std::size_t>(l)];
      if (left < 0) throw Error(ErrorCode::CorruptInput, "over-subscribed Huffman code");
    }
    const auto codes = canonical_codes(lengths);
    table_.assign(std::size_t{1} << max_len_, Entry{});
    for (std::size_t s = 0; s < lengths.size(); ++s) {
      const int l = lengths[s];
      if (l == 0) continue;
      for (std::size_t k = codes[s]; k < table_.size(); k += std::size_t{1} << l)
        table_[k] = Entry{static_cast<std::uint16_t>(s), static_cast<std::uint8_t>(l)};
    }
  }

  std::uint16_t decode(BitReader& br) const {
    const Entry& e = table_[br.peek(max_len_)];
    if (e.length == 0) throw Error(ErrorCode::CorruptInput, "invalid Huffman code");
    br.consume(e.length);
    return e.symbol;
  }

 private:
  struct Entry {
    std::uint16_t symbol = 0;
    std::uint8_t length = 0;
  };
  std::vector<Entry> table_;
  int max_len_ = 0;
};

void inflate_block(BitReader& br, std::vector<std::uint8_t>& out, const HuffmanDecoder& litlen,
                   const HuffmanDecoder& dist) {
  for (;;) {
    const std::uint16_t sym = litlen.decode(br);
    if (sym < 256) {
      out.push_back(static_cast<std::uint8_t>(sym));
      continue;
    }
    if (sym == 256) return;
    const std::size_t li = sym - 257u;
    if (li >= kLengthBase.size()) throw Error(ErrorCode::CorruptInput, "invalid length symbol");
    const std::size_t len = kLengthBase[li] + br.bits(kLengthExtra[li]);
    const std::uint16_t ds = dist.decode(br);
    if (ds >= kDistBase.size()) throw Error(ErrorCode::CorruptInput, "invalid distance symbol");
    const std::size_t d = kDistBase[ds] + br.bits(kDistExtra[ds]);
    if (d > out.size()) throw Error(ErrorCode::CorruptInput, "distance beyond start of output");
    const std::size_t from = out.size() - d;
    for (std::size_t k = 0; k < len; ++k) out.push_back(out[from + k]);
  }
}

std::vector<std::uint8_t> inflate_impl(std::span<const std::uint8_t> input, std::size_t* consumed) {
  BitReader br(input);
  std::vector<std::uint8_t> out;
  out.reserve(input.size() * 3);
  bool last = false;
  while (!last) {
    last = br.bits(1) != 0;
    const std::uint32_t type = br.bits(2);
    if (type == 0) {
      br.align();
      const std::uint32_t len = br.bits(16);
      const std::uint32_t nlen = br.bits(16);
      if ((len ^ 0xFFFFu) != nlen) throw Error(ErrorCode::CorruptInput, "stored block length check failed");
      for (std::uint32_t k = 0; k < len; ++k) out.push_back(br.byte());
    } else if (type == 1) {
      static const auto fixed_ll = fixed_litlen_lengths();
      static const HuffmanDecoder fixed_litlen(fixed_ll);
      static const HuffmanDecoder fixed_dist(std::vector<std::uint8_t>(30, 5));
      inflate_block(br, out, fixed_litlen, fixed_dist);
    } else if (type == 2) {
      const std::size_t hlit = br.bits(5) + 257;
      const std::size_t hdist = br.bits(5) + 1;
      const std::size_t hclen = br.bits(4) + 4;
      if (hlit > 286 || hdist > 30) throw Error(ErrorCode::CorruptInput, "too many length codes");
      std::array<std::uint8_t, 19> cl_len{};
      for (std::size_t i = 0; i < hclen; ++i) cl_len[kCodeLengthOrder[i]] = static_cast<std::uint8_t>(br.bits(3));
      const HuffmanDecoder cl(cl_len);
      std::vector<std::uint8_t> lens;
      lens.reserve(hlit + hdist);
      while (lens.size() < hlit + hdist) {
        const std::uint16_t sym = cl.decode(br);
        if (sym < 16) {
          lens.push_back(static_cast<std::uint8_t>(sym));
          continue;
        }
        std::uint8_t value = 0;
        std::size_t repeat = 0;
        if (sym == 16) {
          if (lens.empty()) throw Error(ErrorCode::CorruptInput, "repeat with no previous length");
          value = lens.back();
          repeat = 3 + br.bits(2);
        } else if (sym == 17) {
          repeat = 3 + br.bits(3);
        } else {
          repeat = 11 + br.bits(7);
        }
        if (lens.size() + repeat > hlit + hdist) throw Error(ErrorCode::CorruptInput, "code lengths overflow");
        lens.insert(lens.end(), repeat, value);
      }
      if (lens[256] == 0) throw Error(ErrorCode::CorruptInput, "missing end-of-block code");
      const HuffmanDecoder litlen(std::span<const std::uint8_t>(lens).first(hlit));
      const HuffmanDecoder dist(std::span<const std::uint8_t>(lens).subspan(hlit));
      inflate_block(br, out, litlen, dist);
    } else {
      throw Error(ErrorCode::CorruptInput, "reserved block type");
    }
  }
  br.align();
  if (consumed) *consumed = br.byte_position();
  return out;
}

}  // namespace

std::vector<std::uint8_t> deflate_raw(std::span<const std::uint8_t> input, int effort) {
  const auto prof = profile_for(effort);
  const auto tokens = tokenize(input, prof);
  BitWriter bw;
  constexpr std::size_t kBlockTokens = 1 << 15;
  std::size_t t = 0;
  std::size_t raw_off = 0;
  do {
    const std::size_t end = std::min(tokens.size(), t + kBlockTokens);
    std::size_t raw_len = 0;
    for (std::size_t k = t; k < end; ++k) raw_len += tokens[k].dist == 0 ? 1 : tokens[k].value;
    const auto block = std::span<const Token>(tokens).subspan(t, end - t);
    write_block(bw, block, input.subspan(raw_off, raw_len), end == tokens.size());
    raw_off += raw_len;
    t = end;
  } while (t < tokens.size());
  return bw.finish();
}

std::vector<std::uint8_t> inflate_raw(std::span<const std::uint8_t> input) {
  return inflate_impl(input, nullptr);
}

std::vector<std::uint8_t> zlib_compress(std::span<const std::uint8_t> input, int effort) {
  // CMF: deflate, 32K window. FLEVEL mirrors the effort band.
  const std::uint8_t cmf = 0x78;
  const std::uint8_t level = effort <= 1 ? 0 : effort <= 5 ? 1 : effort == 6 ? 2 : 3;
  std::uint8_t flg = static_cast<std::uint8_t>(level << 6);
  flg = static_cast<std::uint8_t>(flg + (31 - (cmf * 256 + flg) % 31) % 31);
  std::vector<std::uint8_t> out = {cmf, flg};
  const auto body = deflate_raw(input, effort);
  out.insert(out.end(), body.begin(), body.end());
  const std::uint32_t a = adler32(input);
  for (int s = 24; s >= 0; s -= 8) out.push_back(static_cast<std::uint8_t>(a >> s));
  return out;
}

std::vector<std::uint8_t> zlib_decompress(std::span<const std::uint8_t> input) {
  if (input.size() < 6) throw Error(ErrorCode::CorruptInput, "zlib stream too short");
  const std::uint8_t cmf = input[0];
  const std::uint8_t flg = input[1];
  if ((cmf & 0x0F) != 8 || (cmf >> 4) > 7 || (cmf * 256 + flg) % 31 != 0)
    throw Error(ErrorCode::CorruptInput, "bad zlib header");
  if (flg & 0x20) throw Error(ErrorCode::Unsupported, "preset dictionary");
  std::size_t used = 0;
  auto out = inflate_impl(input.subspan(2), &used);
  if (2 + used + 4 > input.size()) throw Error(ErrorCode::CorruptInput, "missing adler32 trailer");
  std::uint32_t expected = 0;
  for (std::size_t k = 0; k < 4; ++k) expected = (expected << 8) | input[2 + used + k];
  if (expected != adler32(out)) throw Error(ErrorCode::CorruptInput, "adler32 mismatch");
  return out;
}

std::uint32_t adler32(std::span<const std::uint8_t> data, std::uint32_t seed) {
  constexpr std::uint32_t kMod = 65521;
  std::uint32_t a = seed & 0xFFFF;
  std::uint32_t b = seed >> 16;
  std::size_t i = 0;
  while (i < data.size()) {
    const std::size_t chunk = std::min<std::size_t>(5552, data.size() - i);
    for (std::size_t k = 0; k < chunk; ++k) {
      a += data[i + k];
      b += a;
    }
    a %= kMod;
    b %= kMod;
    i += chunk;
  }
  return (b << 16) | a;
}

std::uint32_t crc32(std::span<const std::uint8_t> data, std::uint32_t seed) {
  static const auto table = [] {
    std::array<std::uint32_t, 256> t{};
    for (std::uint32_t n = 0; n < 256; ++n) {
      std::uint32_t c = n;
      for (int k = 0; k < 8; ++k) c = (c & 1) ? 0xEDB88320u ^ (c >> 1) : c >> 1;
      t[n] = c;
    }
    return t;
  }();
  std::uint32_t c = ~seed;
  for (auto b : data) c = table[(c ^ b) & 0xFF] ^ (c >> 8);
  return ~c;
}

}  // namespace greenstore
