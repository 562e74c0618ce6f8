#include "dickesim/basis.hpp"

#include <algorithm>
#include <queue>
#include <set>
#include <stdexcept>

namespace dickesim {

IndexedBasis::IndexedBasis(BasisDescriptor desc, std::vector<std::string> labels)
    : desc_(std::move(desc)), labels_(std::move(labels)) {
    index_.reserve(labels_.size());
    for (int i = 0; i < static_cast<int>(labels_.size()); ++i) {
        auto [it, inserted] = index_.emplace(labels_[static_cast<std::size_t>(i)], i);
        if (!inserted) throw std::invalid_argument("IndexedBasis: duplicate label " + it->first);
    }
}

int IndexedBasis::index_of(const std::string& label) const {
    auto it = index_.find(label);
    return it == index_.end() ? -1 : it->second;
}

int IndexedBasis::require_index(const std::string& label) const {
    int i = index_of(label);
    if (i < 0) throw std::invalid_argument("IndexedBasis: no such label " + label);
    return i;
}

int IndexedBasis::n_atoms() const {
    return std::visit([](const auto& d) { return d.n; }, desc_);
}

StateVector basis_state(const BasisPtr& basis, int index) {
    StateVector psi;
    psi.basis = basis;
    psi.amplitudes = Eigen::VectorXcd::Zero(basis->dim());
    psi.amplitudes(index) = 1.0;
    return psi;
}

std::string cavity_token(int n_L, int n_R) {
    if (n_L == 0 && n_R == 0) return "vac";
    if (n_L == 1 && n_R == 0) return "L";
    if (n_L == 0 && n_R == 1) return "R";
    if (n_L == 1 && n_R == 1) return "LR";
    throw std::invalid_argument("cavity_token: occupations must be 0 or 1");
}

std::pair<int, int> parse_cavity_token(const std::string& token) {
    if (token == "vac") return {0, 0};
    if (token == "L") return {1, 0};
    if (token == "R") return {0, 1};
    if (token == "LR") return {1, 1};
    throw std::invalid_argument("parse_cavity_token: bad cavity token " + token);
}

std::pair<std::string, std::string> split_label(const std::string& label) {
    auto pos = label.find('|');
    if (pos == std::string::npos)
        throw std::invalid_argument("split_label: label has no cavity part: " + label);
    return {label.substr(0, pos), label.substr(pos + 1)};
}

namespace {

void check_atoms(const std::string& atoms, int n) {
    if (static_cast<int>(atoms.size()) != n)
        throw std::invalid_argument("basis: atomic string length != n: " + atoms);
    for (char c : atoms)
        if (c != '0' && c != '1' && c != 'e')
            throw std::invalid_argument("basis: atomic string may contain only 0,1,e");
}

// Neighbours of a FullTensor label under the Eq.-2 coupling structure:
// |0_i>|L> <-> |e_i>|vac'>, |1_i>|R> <-> |e_i>|vac'>.
std::vector<std::string> coupled_labels(const std::string& label, int n) {
    auto [atoms, cav] = split_label(label);
    check_atoms(atoms, n);
    auto [nL, nR] = parse_cavity_token(cav);
    std::vector<std::string> out;
    for (int i = 0; i < n; ++i) {
        char c = atoms[static_cast<std::size_t>(i)];
        std::string a = atoms;
        if (c == '0' && nL == 1) {
            a[static_cast<std::size_t>(i)] = 'e';
            out.push_back(a + "|" + cavity_token(nL - 1, nR));
        } else if (c == '1' && nR == 1) {
            a[static_cast<std::size_t>(i)] = 'e';
            out.push_back(a + "|" + cavity_token(nL, nR - 1));
        } else if (c == 'e') {
            if (nL == 0) {
                a[static_cast<std::size_t>(i)] = '0';
                out.push_back(a + "|" + cavity_token(nL + 1, nR));
            }
            if (nR == 0) {
                a = atoms;
                a[static_cast<std::size_t>(i)] = '1';
                out.push_back(a + "|" + cavity_token(nL, nR + 1));
            }
        }
    }
    return out;
}

}  // namespace

std::vector<std::string> atomic_strings_of_weight(int n, int m, char one) {
    std::vector<std::string> out;
    std::string s(static_cast<std::size_t>(n), '0');
    std::vector<int> idx(static_cast<std::size_t>(m));
    for (int i = 0; i < m; ++i) idx[static_cast<std::size_t>(i)] = i;
    if (m == 0) { out.push_back(s); return out; }
    while (true) {
        std::string t = s;
        for (int i : idx) t[static_cast<std::size_t>(i)] = one;
        out.push_back(t);
        int i = m - 1;
        while (i >= 0 && idx[static_cast<std::size_t>(i)] == n - m + i) --i;
        if (i < 0) break;
        ++idx[static_cast<std::size_t>(i)];
        for (int j = i + 1; j < m; ++j)
            idx[static_cast<std::size_t>(j)] = idx[static_cast<std::size_t>(j - 1)] + 1;
    }
    std::sort(out.begin(), out.end());
    return out;
}

BasisPtr build_basis(const BasisDescriptor& descriptor, const std::vector<std::string>& initial_hint) {
    return std::visit(
        [&](const auto& d) -> BasisPtr {
            using D = std::decay_t<decltype(d)>;
            if (d.n < 1) throw std::invalid_argument("build_basis: n must be >= 1");
            if constexpr (std::is_same_v<D, ReducedSymmetric>) {
                return std::make_shared<IndexedBasis>(descriptor,
                    std::vector<std::string>{"phi0", "phi1", "phi2"});
            } else if constexpr (std::is_same_v<D, SymmetricLadder>) {
                if (d.m < 0 || d.m >= d.n)
                    throw std::invalid_argument("build_basis: ladder step m must satisfy 0 <= m < n");
                auto tag = [&](int m) { return "sym(" + std::to_string(d.n) + "," + std::to_string(m) + ")"; };
                return std::make_shared<IndexedBasis>(descriptor, std::vector<std::string>{
                    tag(d.m) + "|L",
                    "sym(" + std::to_string(d.n) + "," + std::to_string(d.m) + ";e)|vac",
                    tag(d.m + 1) + "|R"});
            } else if constexpr (std::is_same_v<D, SingleExcitation>) {
                std::vector<std::string> labels;
                std::string ground(static_cast<std::size_t>(d.n), '0');
                labels.push_back(ground + "|L");
                for (int i = 0; i < d.n; ++i) {
                    std::string a = ground;
                    a[static_cast<std::size_t>(i)] = 'e';
                    labels.push_back(a + "|vac");
                }
                for (int i = 0; i < d.n; ++i) {
                    std::string a = ground;
                    a[static_cast<std::size_t>(i)] = '1';
                    labels.push_back(a + "|R");
                }
                return std::make_shared<IndexedBasis>(descriptor, std::move(labels));
            } else if constexpr (std::is_same_v<D, AtomicStrings>) {
                std::vector<std::string> labels;
                if (!initial_hint.empty()) {
                    labels = initial_hint;
                } else {
                    for (int m = 0; m <= d.n; ++m)
                        for (const auto& s : atomic_strings_of_weight(d.n, m))
                            labels.push_back(s + "|vac");
                }
                std::sort(labels.begin(), labels.end());
                return std::make_shared<IndexedBasis>(descriptor, std::move(labels));
            } else {
                static_assert(std::is_same_v<D, FullTensor>);
                if (d.n > d.cap)
                    throw std::invalid_argument("build_basis: FullTensor n exceeds cap (" +
                                                std::to_string(d.cap) + ")");
                if (initial_hint.empty())
                    throw std::invalid_argument("build_basis: FullTensor needs an initial_hint label");
                std::set<std::string> seen;
                std::queue<std::string> frontier;
                for (const auto& h : initial_hint) {
                    auto [atoms, cav] = split_label(h);
                    check_atoms(atoms, d.n);
                    parse_cavity_token(cav);
                    if (seen.insert(h).second) frontier.push(h);
                }
                while (!frontier.empty()) {
                    std::string cur = frontier.front();
                    frontier.pop();
                    for (const auto& nb : coupled_labels(cur, d.n))
                        if (seen.insert(nb).second) frontier.push(nb);
                }
                std::vector<std::string> labels(seen.begin(), seen.end());
                // Lexicographic over (atomic string, n_L, n_R), not over the
                // raw label text (cavity tokens do not sort numerically).
                std::sort(labels.begin(), labels.end(),
                          [](const std::string& a, const std::string& b) {
                              auto [sa, ca] = split_label(a);
                              auto [sb, cb] = split_label(b);
                              if (sa != sb) return sa < sb;
                              return parse_cavity_token(ca) < parse_cavity_token(cb);
                          });
                return std::make_shared<IndexedBasis>(descriptor, std::move(labels));
            }
        },
        descriptor);
}

}  // namespace dickesim
