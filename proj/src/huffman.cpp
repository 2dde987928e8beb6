#include "amrlab/huffman.hpp"

#include <algorithm>
#include <deque>
#include <map>

namespace amrlab {

HuffmanCodec HuffmanCodec::build(std::span<const std::int32_t> symbols) {
    // std::map keeps the alphabet ordered by symbol regardless of input order
    std::map<std::int32_t, std::uint64_t> freq;
    for (std::int32_t s : symbols) ++freq[s];

    HuffmanCodec hc;
    if (freq.empty()) return hc;
    if (freq.size() == 1) {
        hc.symbols_.push_back(freq.begin()->first);
        hc.lengths_.push_back(0);
        hc.assign_canonical();
        return hc;
    }

    struct Node {
        std::uint64_t freq;
        std::int32_t sym;   // leaves only
        int left = -1, right = -1;
    };
    std::vector<Node> nodes;
    nodes.reserve(freq.size() * 2);
    for (auto &[s, f] : freq) nodes.push_back({f, s});
    std::sort(nodes.begin(), nodes.end(), [](const Node &a, const Node &b) {
        return a.freq != b.freq ? a.freq < b.freq : a.sym < b.sym;
    });

    // two-queue merge; ties prefer the leaf queue, which is deterministic and
    // keeps depths shallow
    std::deque<int> leaves, internal;
    for (int i = 0; i < int(freq.size()); ++i) leaves.push_back(i);
    auto take = [&]() {
        int id;
        if (internal.empty() ||
            (!leaves.empty() && nodes[std::size_t(leaves.front())].freq <=
                                    nodes[std::size_t(internal.front())].freq)) {
            id = leaves.front();
            leaves.pop_front();
        } else {
            id = internal.front();
            internal.pop_front();
        }
        return id;
    };
    while (leaves.size() + internal.size() > 1) {
        int a = take();
        int b = take();
        nodes.push_back({nodes[std::size_t(a)].freq + nodes[std::size_t(b)].freq, 0, a, b});
        internal.push_back(int(nodes.size()) - 1);
    }

    // depth-first walk for code lengths
    std::vector<std::pair<int, int>> stack{{internal.front(), 0}};
    std::vector<std::pair<std::int32_t, std::uint8_t>> lens;
    while (!stack.empty()) {
        auto [id, depth] = stack.back();
        stack.pop_back();
        const Node &n = nodes[std::size_t(id)];
        if (n.left < 0) {
            if (depth > 63) throw std::runtime_error("huffman code length overflow");
            lens.push_back({n.sym, std::uint8_t(depth)});
        } else {
            stack.push_back({n.left, depth + 1});
            stack.push_back({n.right, depth + 1});
        }
    }
    std::sort(lens.begin(), lens.end(), [](const auto &a, const auto &b) {
        return a.second != b.second ? a.second < b.second : a.first < b.first;
    });
    for (auto &[s, l] : lens) {
        hc.symbols_.push_back(s);
        hc.lengths_.push_back(l);
    }
    hc.assign_canonical();
    return hc;
}

void HuffmanCodec::assign_canonical() {
    codes_.assign(symbols_.size(), 0);
    index_.clear();
    std::uint64_t code = 0;
    std::uint8_t prev_len = lengths_.empty() ? 0 : lengths_[0];
    for (std::size_t i = 0; i < symbols_.size(); ++i) {
        code <<= (lengths_[i] - prev_len);
        codes_[i] = code;
        prev_len = lengths_[i];
        ++code;
        index_[symbols_[i]] = i;
    }
}

void HuffmanCodec::save(ByteWriter &w) const {
    // symbol count, then (symbol, code length) ordered by symbol
    std::vector<std::size_t> order(symbols_.size());
    for (std::size_t i = 0; i < order.size(); ++i) order[i] = i;
    std::sort(order.begin(), order.end(),
              [&](std::size_t a, std::size_t b) { return symbols_[a] < symbols_[b]; });
    w.u32(std::uint32_t(symbols_.size()));
    for (std::size_t i : order) {
        w.i32(symbols_[i]);
        w.u8(lengths_[i]);
    }
}

HuffmanCodec HuffmanCodec::load(ByteReader &r) {
    std::uint32_t n = r.u32();
    std::vector<std::pair<std::int32_t, std::uint8_t>> lens(n);
    for (auto &[s, l] : lens) {
        s = r.i32();
        l = r.u8();
    }
    std::sort(lens.begin(), lens.end(), [](const auto &a, const auto &b) {
        return a.second != b.second ? a.second < b.second : a.first < b.first;
    });
    HuffmanCodec hc;
    for (auto &[s, l] : lens) {
        hc.symbols_.push_back(s);
        hc.lengths_.push_back(l);
    }
    hc.assign_canonical();
    return hc;
}

void HuffmanCodec::encode(std::span<const std::int32_t> symbols, BitWriter &bw) const {
    for (std::int32_t s : symbols) {
        auto it = index_.find(s);
        if (it == index_.end()) throw std::runtime_error("symbol not in huffman table");
        bw.put(codes_[it->second], lengths_[it->second]);
    }
}

std::vector<std::int32_t> HuffmanCodec::decode(BitReader &br, std::size_t count) const {
    std::vector<std::int32_t> out;
    out.reserve(count);
    if (count == 0) return out;
    if (symbols_.empty()) throw std::runtime_error("empty huffman table");
    if (symbols_.size() == 1 && lengths_[0] == 0) {
        out.assign(count, symbols_[0]);
        return out;
    }

    // canonical decode: per length, first code value and first symbol index
    int max_len = lengths_.back();
    std::vector<std::uint64_t> first_code(std::size_t(max_len) + 1, 0);
    std::vector<std::uint64_t> count_at(std::size_t(max_len) + 1, 0);
    std::vector<std::size_t> first_sym(std::size_t(max_len) + 1, 0);
    for (std::size_t i = 0; i < symbols_.size(); ++i) {
        int l = lengths_[i];
        if (count_at[std::size_t(l)] == 0) {
            first_code[std::size_t(l)] = codes_[i];
            first_sym[std::size_t(l)] = i;
        }
        ++count_at[std::size_t(l)];
    }

    for (std::size_t k = 0; k < count; ++k) {
        std::uint64_t code = 0;
        int len = 0;
        for (;;) {
            code = (code << 1) | std::uint64_t(br.get());
            ++len;
            if (len > max_len) throw std::runtime_error("corrupt huffman stream");
            if (count_at[std::size_t(len)] &&
                code >= first_code[std::size_t(len)] &&
                code - first_code[std::size_t(len)] < count_at[std::size_t(len)]) {
                out.push_back(symbols_[first_sym[std::size_t(len)] +
                                       (code - first_code[std::size_t(len)])]);
                break;
            }
        }
    }
    return out;
}

std::vector<std::uint8_t> huffman_encode(std::span<const std::int32_t> codes) {
    HuffmanCodec hc = HuffmanCodec::build(codes);
    ByteWriter w;
    hc.save(w);
    BitWriter bw;
    hc.encode(codes, bw);
    w.bytes.insert(w.bytes.end(), bw.bytes.begin(), bw.bytes.end());
    return w.bytes;
}

std::vector<std::int32_t> huffman_decode(std::span<const std::uint8_t> bytes,
                                         std::size_t count) {
    ByteReader r(bytes.data(), bytes.size());
    HuffmanCodec hc = HuffmanCodec::load(r);
    BitReader br(r.p, r.remaining());
    return hc.decode(br, count);
}

} // namespace amrlab
