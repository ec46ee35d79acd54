#ifndef HDMC_GRID_HPP
#define HDMC_GRID_HPP

#include <cstdint>
#include <string>
#include <vector>

#include "hdmc/common.hpp"

namespace hdmc {

// Pixel symbols. kSentinel never appears inside a frame; it pads
// out-of-bounds cells when a neighborhood context is extracted.
enum PixelSymbol : std::uint8_t {
    kEmpty = 0,
    kShip = 1,
    kBullet = 2,
    kTarget = 3,
    kBullseye = 4,
    kSentinel = 5,
};

inline constexpr int kNumPixelSymbols = 5;  // frame symbols, excluding the sentinel

inline constexpr char kSymbolChars[] = {'.', '^', '|', '#', 'O', '+'};

// Dense 2-D grid of pixel symbols; the observation (and model state) of the
// pixel domains.
struct PixelGrid {
    int height = 0;
    int width = 0;
    std::vector<std::uint8_t> cells;  // [row][col]

    PixelGrid() = default;
    PixelGrid(int h, int w) : height(h), width(w), cells(static_cast<std::size_t>(h) * w, kEmpty) {}

    std::uint8_t& at(int row, int col) { return cells[static_cast<std::size_t>(row) * width + col]; }
    std::uint8_t at(int row, int col) const { return cells[static_cast<std::size_t>(row) * width + col]; }

    // Symbol at (row, col), with sentinel padding outside the frame.
    std::uint8_t at_padded(int row, int col) const {
        if (row < 0 || row >= height || col < 0 || col >= width) return kSentinel;
        return at(row, col);
    }

    bool operator==(const PixelGrid& other) const = default;

    std::uint64_t hash() const {
        std::uint64_t h = splitmix64((static_cast<std::uint64_t>(height) << 32) | static_cast<std::uint64_t>(width));
        for (std::uint8_t c : cells) h = splitmix64(h ^ c);
        return h;
    }
};

// Text form: one line per row, one character per pixel.
inline std::string grid_to_string(const PixelGrid& g) {
    std::string out;
    out.reserve(static_cast<std::size_t>(g.height) * (g.width + 1));
    for (int r = 0; r < g.height; ++r) {
        for (int c = 0; c < g.width; ++c) out.push_back(kSymbolChars[g.at(r, c)]);
        out.push_back('\n');
    }
    return out;
}

inline PixelGrid grid_from_string(const std::string& text) {
    std::vector<std::string> rows;
    std::string cur;
    for (char ch : text) {
        if (ch == '\n') {
            if (!cur.empty()) rows.push_back(cur);
            cur.clear();
        } else {
            cur.push_back(ch);
        }
    }
    if (!cur.empty()) rows.push_back(cur);
    if (rows.empty()) throw ParseError("empty grid", 1);
    PixelGrid g(static_cast<int>(rows.size()), static_cast<int>(rows[0].size()));
    for (int r = 0; r < g.height; ++r) {
        if (static_cast<int>(rows[r].size()) != g.width) throw ParseError("ragged grid row", r + 1);
        for (int c = 0; c < g.width; ++c) {
            int sym = -1;
            for (int k = 0; k <= kNumPixelSymbols; ++k)
                if (rows[r][c] == kSymbolChars[k]) sym = k;
            if (sym < 0 || sym == kSentinel) throw ParseError("unknown pixel character", r + 1);
            g.at(r, c) = static_cast<std::uint8_t>(sym);
        }
    }
    return g;
}

}  // namespace hdmc

#endif  // HDMC_GRID_HPP
