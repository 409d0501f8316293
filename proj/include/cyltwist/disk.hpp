#pragma once

#include <array>
#include <cstdint>
#include <memory>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

namespace cyltwist {

// Neighbor slots, fixed order.
enum Dir : int { DIR_E = 0, DIR_N = 1, DIR_W = 2, DIR_S = 3 };

// A quadriculated region: a finite set of unit squares on the integer
// lattice. Coordinates: x grows rightward, y grows upward. The square
// (x,y) covers [x,x+1]x[y,y+1] and has color (-1)^(x+y), +1 = black.
//
// Squares are indexed row-major with y descending then x ascending, so
// index 0 is the top-left square of the bounding box. This ordering is
// fixed: plug bit masks must be portable across runs.
struct QuadDisk {
    int width = 0;
    int height = 0;
    std::vector<int> index_at;                    // width*height cells, -1 if absent
    std::vector<std::pair<int, int>> coords;      // square index -> (x,y)
    std::vector<std::array<int, 4>> nbr;          // neighbor index per Dir, -1 if none
    int black_count = 0;
    int white_count = 0;
    bool balanced = false;
    bool nontrivial = false;
    bool is_disk = false;

    int size() const { return static_cast<int>(coords.size()); }

    int cell(int x, int y) const {
        if (x < 0 || x >= width || y < 0 || y >= height) return -1;
        return index_at[static_cast<std::size_t>(y) * width + x];
    }

    // +1 black, -1 white
    int color(int idx) const {
        auto [x, y] = coords[static_cast<std::size_t>(idx)];
        return ((x + y) % 2 == 0) ? +1 : -1;
    }

    // color imbalance #black - #white
    int imbalance() const { return black_count - white_count; }

    std::uint64_t full_mask() const {
        return size() == 64 ? ~0ull : ((1ull << size()) - 1);
    }

    bool same_shape(const QuadDisk& o) const {
        return width == o.width && height == o.height && index_at == o.index_at;
    }

    std::string to_text() const {
        std::string out;
        for (int y = height - 1; y >= 0; --y) {
            for (int x = 0; x < width; ++x) out += (cell(x, y) >= 0 ? '#' : '.');
            out += '\n';
        }
        return out;
    }
};

using DiskPtr = std::shared_ptr<const QuadDisk>;

namespace detail {

inline void compute_flags(QuadDisk& d) {
    const int n = d.size();
    d.black_count = d.white_count = 0;
    for (int i = 0; i < n; ++i) (d.color(i) > 0 ? d.black_count : d.white_count)++;
    d.balanced = d.black_count == d.white_count;

    bool has_branch = false;
    for (int i = 0; i < n; ++i) {
        int deg = 0;
        for (int k = 0; k < 4; ++k) deg += d.nbr[i][k] >= 0;
        if (deg >= 3) has_branch = true;
    }
    d.nontrivial = n >= 6 && has_branch;

    // squares edge-connected?
    std::vector<char> seen(n, 0);
    std::vector<int> stack{0};
    seen[0] = 1;
    int reached = 1;
    while (!stack.empty()) {
        int v = stack.back();
        stack.pop_back();
        for (int k = 0; k < 4; ++k) {
            int w = d.nbr[v][k];
            if (w >= 0 && !seen[w]) {
                seen[w] = 1;
                ++reached;
                stack.push_back(w);
            }
        }
    }
    bool connected = reached == n;

    // complement edge-connected within a one-cell margin frame (no holes)
    int fw = d.width + 2, fh = d.height + 2;
    auto inside = [&](int x, int y) { return d.cell(x - 1, y - 1) >= 0; };
    std::vector<char> cseen(static_cast<std::size_t>(fw) * fh, 0);
    std::vector<std::pair<int, int>> cstack{{0, 0}};
    cseen[0] = 1;
    int creached = 1;
    int ctotal = 0;
    for (int y = 0; y < fh; ++y)
        for (int x = 0; x < fw; ++x)
            if (!inside(x, y)) ++ctotal;
    while (!cstack.empty()) {
        auto [x, y] = cstack.back();
        cstack.pop_back();
        const int dx[4] = {1, 0, -1, 0}, dy[4] = {0, 1, 0, -1};
        for (int k = 0; k < 4; ++k) {
            int nx = x + dx[k], ny = y + dy[k];
            if (nx < 0 || nx >= fw || ny < 0 || ny >= fh) continue;
            if (inside(nx, ny)) continue;
            std::size_t id = static_cast<std::size_t>(ny) * fw + nx;
            if (!cseen[id]) {
                cseen[id] = 1;
                ++creached;
                cstack.push_back({nx, ny});
            }
        }
    }
    d.is_disk = connected && creached == ctotal;
}

}  // namespace detail

// Parse an ASCII grid: '#' = square, '.' = absent; rows top-to-bottom are
// decreasing y. Throws on empty or edge-disconnected input; a region with
// holes parses with is_disk = false (callers decide whether that matters).
inline DiskPtr parse_disk(std::string_view text) {
    std::vector<std::string> rows;
    std::string cur;
    for (char c : text) {
        if (c == '\n') {
            rows.push_back(cur);
            cur.clear();
        } else if (c == '\r') {
            continue;
        } else {
            cur += c;
        }
    }
    if (!cur.empty()) rows.push_back(cur);
    while (!rows.empty() && rows.back().find('#') == std::string::npos) rows.pop_back();
    std::size_t skip = 0;
    while (skip < rows.size() && rows[skip].find('#') == std::string::npos) ++skip;
    rows.erase(rows.begin(), rows.begin() + skip);
    if (rows.empty()) throw std::invalid_argument("disk: no squares in input");

    auto d = std::make_shared<QuadDisk>();
    d->height = static_cast<int>(rows.size());
    for (auto& r : rows) d->width = std::max(d->width, static_cast<int>(r.size()));
    d->index_at.assign(static_cast<std::size_t>(d->width) * d->height, -1);

    // rows[0] is the top row, i.e. y = height-1
    for (int ry = 0; ry < d->height; ++ry) {
        const std::string& r = rows[static_cast<std::size_t>(ry)];
        int y = d->height - 1 - ry;
        for (int x = 0; x < static_cast<int>(r.size()); ++x) {
            char c = r[static_cast<std::size_t>(x)];
            if (c == '#') {
                d->index_at[static_cast<std::size_t>(y) * d->width + x] =
                    static_cast<int>(d->coords.size());
                d->coords.push_back({x, y});
            } else if (c != '.' && c != ' ') {
                throw std::invalid_argument(std::string("disk: bad character '") + c + "'");
            }
        }
    }
    if (d->coords.size() > 64) throw std::invalid_argument("disk: more than 64 squares unsupported");

    d->nbr.resize(d->coords.size());
    for (int i = 0; i < d->size(); ++i) {
        auto [x, y] = d->coords[static_cast<std::size_t>(i)];
        d->nbr[static_cast<std::size_t>(i)] = {d->cell(x + 1, y), d->cell(x, y + 1),
                                               d->cell(x - 1, y), d->cell(x, y - 1)};
    }
    QuadDisk& ref = const_cast<QuadDisk&>(*d);
    detail::compute_flags(ref);

    // connectivity is fatal: downstream code assumes one region
    {
        int n = d->size();
        std::vector<char> seen(static_cast<std::size_t>(n), 0);
        std::vector<int> stack{0};
        seen[0] = 1;
        int reached = 1;
        while (!stack.empty()) {
            int v = stack.back();
            stack.pop_back();
            for (int k = 0; k < 4; ++k) {
                int w = d->nbr[static_cast<std::size_t>(v)][static_cast<std::size_t>(k)];
                if (w >= 0 && !seen[static_cast<std::size_t>(w)]) {
                    seen[static_cast<std::size_t>(w)] = 1;
                    ++reached;
                    stack.push_back(w);
                }
            }
        }
        if (reached != n) throw std::invalid_argument("disk: squares are not edge-connected");
    }
    return d;
}

inline DiskPtr make_rectangle(int w, int h) {
    std::string text;
    for (int y = 0; y < h; ++y) text += std::string(static_cast<std::size_t>(w), '#') + "\n";
    return parse_disk(text);
}

}  // namespace cyltwist
