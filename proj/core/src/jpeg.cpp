#include "mcbir/jpeg.hpp"

#include <algorithm>
#include <array>
#include <optional>
#include <string>

#include "mcbir/error.hpp"

namespace mcbir {

namespace {

constexpr std::uint8_t kSOI = 0xD8;
constexpr std::uint8_t kEOI = 0xD9;
constexpr std::uint8_t kSOS = 0xDA;
constexpr std::uint8_t kDQT = 0xDB;
constexpr std::uint8_t kDNL = 0xDC;
constexpr std::uint8_t kDRI = 0xDD;
constexpr std::uint8_t kDHT = 0xC4;
constexpr std::uint8_t kDAC = 0xCC;
constexpr std::uint8_t kRST0 = 0xD0;

[[noreturn]] void fail(const std::string& what, std::size_t offset) {
  throw Error(Errc::jpeg_decode, what, offset);
}

[[noreturn]] void unsupported(const std::string& what, std::size_t offset) {
  throw Error(Errc::unsupported_mode, what, offset);
}

/// Canonical Huffman table in the maxcode/valptr form of T.81 Annex F.
class HuffmanTable {
 public:
  void build(const std::array<std::uint8_t, 16>& counts,
             std::vector<std::uint8_t> values, std::size_t offset) {
    values_ = std::move(values);
    int code = 0;
    int k = 0;
    for (int len = 1; len <= 16; ++len) {
      const int n = counts[len - 1];
      if (n == 0) {
        maxcode_[len] = -1;
      } else {
        valptr_[len] = k;
        mincode_[len] = code;
        code += n;
        k += n;
        maxcode_[len] = code - 1;
        if (code > (1 << len)) fail("Huffman table overflows its code space", offset);
      }
      code <<= 1;
    }
    defined_ = true;
  }

  bool defined() const { return defined_; }

  template <typename BitSource>
  std::uint8_t decode(BitSource& bits) const {
    int code = 0;
    for (int len = 1; len <= 16; ++len) {
      code = (code << 1) | bits.bit();
      if (code <= maxcode_[len]) {
        return values_[static_cast<std::size_t>(valptr_[len] + code - mincode_[len])];
      }
    }
    fail("invalid Huffman code", bits.offset());
  }

 private:
  std::array<int, 17> maxcode_{};
  std::array<int, 17> mincode_{};
  std::array<int, 17> valptr_{};
  std::vector<std::uint8_t> values_;
  bool defined_ = false;
};

/// Reads entropy-coded bits, undoing 0xFF00 byte stuffing. Running into a
/// marker while bits are still needed means the segment is truncated.
class BitReader {
 public:
  BitReader(std::span<const std::uint8_t> data, std::size_t pos)
      : data_(data), pos_(pos) {}

  int bit() {
    if (left_ == 0) fetch();
    --left_;
    return (current_ >> left_) & 1;
  }

  int receive(int count) {
    int v = 0;
    for (int i = 0; i < count; ++i) v = (v << 1) | bit();
    return v;
  }

  /// Drops any partial byte, as required before a restart marker.
  void align() { left_ = 0; }

  std::size_t offset() const { return pos_; }
  void seek(std::size_t pos) {
    pos_ = pos;
    left_ = 0;
  }

 private:
  void fetch() {
    if (pos_ >= data_.size()) fail("entropy-coded data runs past end of file", pos_);
    const std::uint8_t b = data_[pos_];
    if (b == 0xFF) {
      if (pos_ + 1 >= data_.size()) fail("entropy-coded data runs past end of file", pos_);
      if (data_[pos_ + 1] != 0x00) fail("unexpected marker inside entropy-coded data", pos_);
      pos_ += 2;
    } else {
      pos_ += 1;
    }
    current_ = b;
    left_ = 8;
  }

  std::span<const std::uint8_t> data_;
  std::size_t pos_;
  std::uint8_t current_ = 0;
  int left_ = 0;
};

int extend(int v, int t) {
  return v < (1 << (t - 1)) ? v - (1 << t) + 1 : v;
}

struct FrameComponent {
  int id = 0;
  int h = 1;
  int v = 1;
  int quant_index = 0;
  int dc_table = 0;
  int ac_table = 0;
  int prediction = 0;
  bool quant_bound = false;
  std::vector<bool> coded;
};

class Decoder {
 public:
  explicit Decoder(std::span<const std::uint8_t> bytes) : data_(bytes) {}

  JpegCoefficients run() {
    if (!looks_like_jpeg(data_)) {
      throw Error(Errc::unsupported_format, "missing JPEG SOI marker");
    }
    pos_ = 2;
    bool done = false;
    while (!done) {
      const std::size_t marker_pos = pos_;
      const std::uint8_t marker = next_marker();
      switch (marker) {
        case 0xC0:
        case 0xC1:
          read_frame(marker_pos);
          break;
        case 0xC2:
        case 0xC6:
        case 0xCA:
        case 0xCE:
          unsupported("progressive JPEG is not supported", marker_pos);
        case 0xC3:
        case 0xC7:
        case 0xCB:
        case 0xCF:
          unsupported("lossless JPEG is not supported", marker_pos);
        case 0xC5:
          unsupported("hierarchical JPEG is not supported", marker_pos);
        case 0xC9:
        case 0xCD:
        case kDAC:
          unsupported("arithmetic-coded JPEG is not supported", marker_pos);
        case kDHT:
          read_huffman_tables();
          break;
        case kDQT:
          read_quant_tables();
          break;
        case kDRI:
          read_restart_interval();
          break;
        case kDNL:
          unsupported("DNL marker is not supported", marker_pos);
        case kSOS:
          read_scan(marker_pos);
          break;
        case kEOI:
          done = true;
          break;
        case kSOI:
          fail("unexpected SOI marker", marker_pos);
        default:
          if (marker >= kRST0 && marker <= kRST0 + 7) break;  // stray RST
          skip_segment();  // APPn, COM, and anything else with a length
          break;
      }
    }
    return finish();
  }

 private:
  std::uint8_t byte_at(std::size_t p) const {
    if (p >= data_.size()) fail("unexpected end of file", p);
    return data_[p];
  }

  int u16_at(std::size_t p) const { return (byte_at(p) << 8) | byte_at(p + 1); }

  std::uint8_t next_marker() {
    // Tolerate junk between segments; encoders occasionally leave some.
    while (pos_ < data_.size() && data_[pos_] != 0xFF) ++pos_;
    while (pos_ < data_.size() && data_[pos_] == 0xFF) ++pos_;
    if (pos_ >= data_.size()) fail("missing EOI marker", data_.size());
    return data_[pos_++];
  }

  /// Returns [start, end) of the segment payload after its length field.
  std::pair<std::size_t, std::size_t> segment() {
    const int length = u16_at(pos_);
    if (length < 2) fail("invalid segment length", pos_);
    const std::size_t start = pos_ + 2;
    const std::size_t end = pos_ + static_cast<std::size_t>(length);
    if (end > data_.size()) fail("segment runs past end of file", pos_);
    pos_ = end;
    return {start, end};
  }

  void skip_segment() { segment(); }

  void read_quant_tables() {
    auto [p, end] = segment();
    while (p < end) {
      const int pq = byte_at(p) >> 4;
      const int tq = byte_at(p) & 15;
      if (tq > 3 || pq > 1) fail("invalid DQT table spec", p);
      ++p;
      const std::size_t need = pq == 0 ? 64 : 128;
      if (p + need > end) fail("DQT segment truncated", p);
      auto& table = quant_[tq];
      for (int k = 0; k < 64; ++k) {
        const int q = pq == 0 ? byte_at(p + k) : u16_at(p + 2 * k);
        if (q == 0) fail("zero quantization step", p);
        table.values[kZigzagToNatural[k]] = static_cast<std::uint16_t>(q);
      }
      table.defined = true;
      p += need;
    }
  }

  void read_huffman_tables() {
    auto [p, end] = segment();
    while (p < end) {
      const int tc = byte_at(p) >> 4;
      const int th = byte_at(p) & 15;
      if (tc > 1 || th > 3) fail("invalid DHT table spec", p);
      const std::size_t table_pos = p;
      ++p;
      if (p + 16 > end) fail("DHT segment truncated", p);
      std::array<std::uint8_t, 16> counts{};
      std::size_t total = 0;
      for (int i = 0; i < 16; ++i) {
        counts[i] = byte_at(p + i);
        total += counts[i];
      }
      p += 16;
      if (total > 256 || p + total > end) fail("DHT segment truncated", p);
      std::vector<std::uint8_t> values(data_.begin() + static_cast<std::ptrdiff_t>(p),
                                       data_.begin() + static_cast<std::ptrdiff_t>(p + total));
      p += total;
      (tc == 0 ? dc_tables_ : ac_tables_)[th].build(counts, std::move(values), table_pos);
    }
  }

  void read_restart_interval() {
    auto [p, end] = segment();
    if (end - p < 2) fail("DRI segment truncated", p);
    restart_interval_ = u16_at(p);
  }

  void read_frame(std::size_t marker_pos) {
    if (frame_seen_) fail("multiple frames", marker_pos);
    auto [p, end] = segment();
    if (end - p < 6) fail("SOF segment truncated", p);
    const int precision = byte_at(p);
    if (precision != 8) {
      unsupported("only 8-bit precision is supported", p);
    }
    height_ = u16_at(p + 1);
    width_ = u16_at(p + 3);
    const int nc = byte_at(p + 5);
    if (height_ == 0) unsupported("image height defined by DNL is not supported", p + 1);
    if (width_ == 0) fail("zero image width", p + 3);
    if (nc != 1 && nc != 3) {
      unsupported("only 1 or 3 components are supported, got " + std::to_string(nc), p + 5);
    }
    if (end - p < static_cast<std::size_t>(6 + 3 * nc)) fail("SOF segment truncated", p);
    for (int i = 0; i < nc; ++i) {
      const std::size_t q = p + 6 + 3 * static_cast<std::size_t>(i);
      FrameComponent c;
      c.id = byte_at(q);
      c.h = byte_at(q + 1) >> 4;
      c.v = byte_at(q + 1) & 15;
      c.quant_index = byte_at(q + 2);
      if (c.h < 1 || c.h > 4 || c.v < 1 || c.v > 4) fail("invalid sampling factor", q + 1);
      if (c.quant_index > 3) fail("invalid quantization table index", q + 2);
      comps_.push_back(c);
    }
    if (nc == 1) {
      // A single-component frame is always coded non-interleaved.
      comps_[0].h = comps_[0].v = 1;
    }
    for (const auto& c : comps_) {
      hmax_ = std::max(hmax_, c.h);
      vmax_ = std::max(vmax_, c.v);
    }
    mcus_x_ = (width_ + 8 * hmax_ - 1) / (8 * hmax_);
    mcus_y_ = (height_ + 8 * vmax_ - 1) / (8 * vmax_);

    grids_.resize(comps_.size());
    for (std::size_t i = 0; i < comps_.size(); ++i) {
      auto& c = comps_[i];
      auto& g = grids_[i];
      g.component_id = c.id;
      g.h_sampling = c.h;
      g.v_sampling = c.v;
      g.width = (width_ * c.h + hmax_ - 1) / hmax_;
      g.height = (height_ * c.v + vmax_ - 1) / vmax_;
      g.blocks_wide = mcus_x_ * c.h;
      g.blocks_high = mcus_y_ * c.v;
      g.blocks.resize(static_cast<std::size_t>(g.blocks_wide) * g.blocks_high);
      c.coded.assign(g.blocks.size(), false);
    }
    frame_seen_ = true;
  }

  void read_scan(std::size_t marker_pos) {
    if (!frame_seen_) fail("SOS before frame header", marker_pos);
    auto [p, end] = segment();
    const int ns = byte_at(p);
    if (ns < 1 || ns > 4 || end - p != static_cast<std::size_t>(4 + 2 * ns)) {
      fail("malformed SOS header", p);
    }
    std::vector<std::size_t> members;
    for (int i = 0; i < ns; ++i) {
      const std::size_t q = p + 1 + 2 * static_cast<std::size_t>(i);
      const int id = byte_at(q);
      auto it = std::find_if(comps_.begin(), comps_.end(),
                             [&](const FrameComponent& c) { return c.id == id; });
      if (it == comps_.end()) fail("scan references unknown component", q);
      it->dc_table = byte_at(q + 1) >> 4;
      it->ac_table = byte_at(q + 1) & 15;
      if (it->dc_table > 3 || it->ac_table > 3) fail("invalid Huffman table index", q + 1);
      if (!dc_tables_[it->dc_table].defined() || !ac_tables_[it->ac_table].defined()) {
        fail("scan uses an undefined Huffman table", q + 1);
      }
      members.push_back(static_cast<std::size_t>(it - comps_.begin()));
    }
    const std::size_t sp = p + 1 + 2 * static_cast<std::size_t>(ns);
    const int ss = byte_at(sp);
    const int se = byte_at(sp + 1);
    const int ah = byte_at(sp + 2) >> 4;
    const int al = byte_at(sp + 2) & 15;
    if (ss != 0 || se != 63 || ah != 0 || al != 0) {
      unsupported("spectral selection / successive approximation scans are not baseline", sp);
    }

    for (auto m : members) {
      auto& c = comps_[m];
      const auto& table = quant_[c.quant_index];
      if (!table.defined) fail("component uses an undefined quantization table", p);
      if (!c.quant_bound) {
        grids_[m].quant_table = table.values;
        c.quant_bound = true;
      }
      c.prediction = 0;
    }

    BitReader bits(data_, pos_);
    if (members.size() == 1) {
      decode_non_interleaved(bits, members[0]);
    } else {
      decode_interleaved(bits, members);
    }
    pos_ = bits.offset();
  }

  void handle_restart(BitReader& bits, int& expected_rst,
                      const std::vector<std::size_t>& members) {
    bits.align();
    const std::size_t at = bits.offset();
    if (at + 1 >= data_.size() || data_[at] != 0xFF ||
        data_[at + 1] != kRST0 + expected_rst) {
      fail("expected RST" + std::to_string(expected_rst) + " marker", at);
    }
    bits.seek(at + 2);
    expected_rst = (expected_rst + 1) & 7;
    for (auto m : members) comps_[m].prediction = 0;
  }

  void decode_non_interleaved(BitReader& bits, std::size_t m) {
    auto& g = grids_[m];
    const int bw = g.valid_blocks_wide();
    const int bh = g.valid_blocks_high();
    const long total = static_cast<long>(bw) * bh;
    int expected_rst = 0;
    const std::vector<std::size_t> members{m};
    for (long n = 0; n < total; ++n) {
      if (restart_interval_ > 0 && n > 0 && n % restart_interval_ == 0) {
        handle_restart(bits, expected_rst, members);
      }
      const int bx = static_cast<int>(n % bw);
      const int by = static_cast<int>(n / bw);
      decode_block(bits, m, bx, by);
    }
  }

  void decode_interleaved(BitReader& bits, const std::vector<std::size_t>& members) {
    int blocks_per_mcu = 0;
    for (auto m : members) blocks_per_mcu += comps_[m].h * comps_[m].v;
    if (blocks_per_mcu > 10) fail("too many blocks per MCU", pos_);
    const long total = static_cast<long>(mcus_x_) * mcus_y_;
    int expected_rst = 0;
    for (long n = 0; n < total; ++n) {
      if (restart_interval_ > 0 && n > 0 && n % restart_interval_ == 0) {
        handle_restart(bits, expected_rst, members);
      }
      const int mx = static_cast<int>(n % mcus_x_);
      const int my = static_cast<int>(n / mcus_x_);
      for (auto m : members) {
        const auto& c = comps_[m];
        for (int v = 0; v < c.v; ++v) {
          for (int h = 0; h < c.h; ++h) {
            decode_block(bits, m, mx * c.h + h, my * c.v + v);
          }
        }
      }
    }
  }

  void decode_block(BitReader& bits, std::size_t m, int bx, int by) {
    auto& c = comps_[m];
    auto& g = grids_[m];
    DctBlock& block = g.block(bx, by);
    block.coefficients.fill(0.0);
    const auto& q = g.quant_table;

    const int t = dc_tables_[c.dc_table].decode(bits);
    if (t > 11) fail("DC magnitude category out of range", bits.offset());
    const int diff = t == 0 ? 0 : extend(bits.receive(t), t);
    c.prediction += diff;
    block.coefficients[0] = static_cast<double>(c.prediction) * q[0];

    const auto& ac = ac_tables_[c.ac_table];
    for (int k = 1; k < 64;) {
      const int rs = ac.decode(bits);
      const int r = rs >> 4;
      const int s = rs & 15;
      if (s == 0) {
        if (r != 15) break;  // EOB
        k += 16;
        continue;
      }
      if (s > 10) fail("AC magnitude category out of range", bits.offset());
      k += r;
      if (k > 63) fail("AC run exceeds block", bits.offset());
      const int z = kZigzagToNatural[k];
      block.coefficients[z] = static_cast<double>(extend(bits.receive(s), s)) * q[z];
      ++k;
    }
    c.coded[static_cast<std::size_t>(by) * g.blocks_wide + bx] = true;
  }

  JpegCoefficients finish() {
    if (!frame_seen_) fail("no SOF0 frame header", pos_);
    for (std::size_t i = 0; i < comps_.size(); ++i) {
      auto& g = grids_[i];
      const auto& coded = comps_[i].coded;
      const int vw = g.valid_blocks_wide();
      const int vh = g.valid_blocks_high();
      for (int by = 0; by < vh; ++by) {
        for (int bx = 0; bx < vw; ++bx) {
          if (!coded[static_cast<std::size_t>(by) * g.blocks_wide + bx]) {
            fail("component " + std::to_string(g.component_id) +
                     " has blocks missing from every scan",
                 pos_);
          }
        }
      }
      // Padding blocks skipped by a non-interleaved scan replicate the edge.
      for (int by = 0; by < g.blocks_high; ++by) {
        for (int bx = 0; bx < g.blocks_wide; ++bx) {
          if (!coded[static_cast<std::size_t>(by) * g.blocks_wide + bx]) {
            g.block(bx, by) = g.block(std::min(bx, vw - 1), std::min(by, vh - 1));
          }
        }
      }
    }
    JpegCoefficients out;
    out.width = width_;
    out.height = height_;
    out.restart_interval = restart_interval_;
    out.components = std::move(grids_);
    return out;
  }

  struct QuantTable {
    std::array<std::uint16_t, 64> values{};
    bool defined = false;
  };

  std::span<const std::uint8_t> data_;
  std::size_t pos_ = 0;
  std::array<QuantTable, 4> quant_{};
  std::array<HuffmanTable, 4> dc_tables_{};
  std::array<HuffmanTable, 4> ac_tables_{};
  int restart_interval_ = 0;
  bool frame_seen_ = false;
  int width_ = 0;
  int height_ = 0;
  int hmax_ = 1;
  int vmax_ = 1;
  int mcus_x_ = 0;
  int mcus_y_ = 0;
  std::vector<FrameComponent> comps_;
  std::vector<CoefficientGrid> grids_;
};

}  // namespace

bool looks_like_jpeg(std::span<const std::uint8_t> bytes) noexcept {
  return bytes.size() >= 2 && bytes[0] == 0xFF && bytes[1] == kSOI;
}

JpegCoefficients decode_jpeg_coefficients(std::span<const std::uint8_t> bytes) {
  return Decoder(bytes).run();
}

}  // namespace mcbir
