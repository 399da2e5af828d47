#include "intuition/hmm.hpp"

#include "intuition/detail/text_values.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <istream>
#include <numeric>
#include <ostream>
#include <stdexcept>
#include <string>

namespace intuition::baselines {

namespace {

void check_rows(const std::vector<double>& m, int rows, int cols, double tol, const char* what) {
    for (int r = 0; r < rows; ++r) {
        double sum = 0.0;
        for (int c = 0; c < cols; ++c) {
            const double v = m[static_cast<std::size_t>(r) * cols + c];
            if (!(v >= 0.0) || !std::isfinite(v))
                throw std::invalid_argument(std::string(what) + " has a negative or non-finite entry");
            sum += v;
        }
        if (std::abs(sum - 1.0) > tol)
            throw std::invalid_argument(std::string(what) + " row " + std::to_string(r) + " sums to " +
                                        std::to_string(sum));
    }
}

} // namespace

void HmmModel::check(double tol) const {
    if (states < 1 || symbols < 1 || classes < 1)
        throw std::invalid_argument("hmm dimensions must be positive");
    if (state_class.size() != static_cast<std::size_t>(states) || initial.size() != static_cast<std::size_t>(states) ||
        transition.size() != static_cast<std::size_t>(states) * states ||
        emission.size() != static_cast<std::size_t>(states) * symbols)
        throw std::invalid_argument("hmm matrix sizes inconsistent");
    for (int c : state_class)
        if (c < 0 || c >= classes)
            throw std::invalid_argument("state mapped to unknown class");
    if (positions > 0) {
        if (block_offsets.size() != static_cast<std::size_t>(positions) + 1 || block_offsets.front() != 0 ||
            block_offsets.back() != symbols || !std::is_sorted(block_offsets.begin(), block_offsets.end()))
            throw std::invalid_argument("hmm symbol blocks inconsistent");
        if (states != classes * symbols)
            throw std::invalid_argument("chain hmm needs one state per (symbol, class)");
        for (int i = 0; i < states; ++i) {
            const auto [lo, hi] = successor_range(i);
            for (int j = 0; j < states; ++j)
                if ((j < lo || j >= hi) && a(i, j) != 0.0)
                    throw std::invalid_argument("transition leaves the next position's block");
        }
    }
    check_rows(initial, 1, states, tol, "initial");
    check_rows(transition, states, states, tol, "transition");
    check_rows(emission, states, symbols, tol, "emission");
}

std::pair<int, int> HmmModel::successor_range(int state) const {
    if (positions == 0)
        return {0, states};
    const int o = state / classes;
    int t = static_cast<int>(std::upper_bound(block_offsets.begin(), block_offsets.end(), o) -
                             block_offsets.begin()) - 1;
    t = std::min(t + 1, positions - 1);
    return {block_offsets[t] * classes, block_offsets[t + 1] * classes};
}

HmmModel make_positional_hmm(int classes, std::vector<int> block_sizes) {
    if (classes < 1 || block_sizes.empty() ||
        std::any_of(block_sizes.begin(), block_sizes.end(), [](int n) { return n < 1; }))
        throw std::invalid_argument("positional hmm needs classes and non-empty symbol blocks");
    HmmModel m;
    m.classes = classes;
    m.positions = static_cast<int>(block_sizes.size());
    m.block_offsets.assign(1, 0);
    for (int n : block_sizes)
        m.block_offsets.push_back(m.block_offsets.back() + n);
    m.symbols = m.block_offsets.back();
    m.states = classes * m.symbols;
    m.state_class.resize(m.states);
    m.emission.assign(static_cast<std::size_t>(m.states) * m.symbols, 0.0);
    for (int s = 0; s < m.states; ++s) {
        m.state_class[s] = s % classes;
        m.emission[static_cast<std::size_t>(s) * m.symbols + s / classes] = 1.0;
    }
    m.initial.assign(m.states, 0.0);
    const int first = m.block_offsets[1] * classes;
    for (int s = 0; s < first; ++s)
        m.initial[s] = 1.0 / first;
    m.transition.assign(static_cast<std::size_t>(m.states) * m.states, 0.0);
    for (int s = 0; s < m.states; ++s) {
        const auto [lo, hi] = m.successor_range(s);
        if (m.position_of(s) == m.positions - 1) {
            m.transition[static_cast<std::size_t>(s) * m.states + s] = 1.0;
            continue;
        }
        for (int j = lo; j < hi; ++j)
            m.transition[static_cast<std::size_t>(s) * m.states + j] = 1.0 / (hi - lo);
    }
    return m;
}

int HmmModel::position_of(int state) const {
    if (positions == 0)
        return 0;
    const int o = state / classes;
    return static_cast<int>(std::upper_bound(block_offsets.begin(), block_offsets.end(), o) -
                            block_offsets.begin()) - 1;
}

HmmModel train_hmm(HmmModel m, std::span<const LabeledSequence> sequences) {
    if (m.positions < 1 || m.states != m.classes * m.symbols)
        throw std::invalid_argument("train_hmm needs a positional model");
    if (sequences.empty())
        throw std::invalid_argument("cannot train on an empty sequence set");
    const int C = m.classes;
    const int S = m.states;
    std::vector<double> class_count(C, 0.0);
    std::vector<double> first(static_cast<std::size_t>(m.symbols) * C, 0.0); // [o][c]
    std::vector<double> trans(static_cast<std::size_t>(S) * m.symbols, 0.0); // [(o,c)][o']
    std::vector<double> out(S, 0.0);

    for (const auto& seq : sequences) {
        if (seq.label < 0 || seq.label >= C)
            throw std::invalid_argument("sequence label outside the class range");
        if (seq.symbols.empty() || static_cast<int>(seq.symbols.size()) > m.positions)
            throw std::invalid_argument("sequence length must be 1.." + std::to_string(m.positions));
        for (std::size_t t = 0; t < seq.symbols.size(); ++t) {
            const int o = seq.symbols[t];
            if (o < m.block_offsets[t] || o >= m.block_offsets[t + 1])
                throw std::invalid_argument("symbol " + std::to_string(o) + " not in block " + std::to_string(t));
        }
        class_count[seq.label] += 1.0;
        first[static_cast<std::size_t>(seq.symbols[0]) * C + seq.label] += 1.0;
        for (std::size_t t = 1; t < seq.symbols.size(); ++t) {
            const int from = seq.symbols[t - 1] * C + seq.label;
            trans[static_cast<std::size_t>(from) * m.symbols + seq.symbols[t]] += 1.0;
            out[from] += 1.0;
        }
    }

    // Add-one smoothing; a path never changes class.
    const double n = static_cast<double>(sequences.size());
    const int b0 = m.block_offsets[1];
    std::fill(m.initial.begin(), m.initial.end(), 0.0);
    for (int o = 0; o < b0; ++o)
        for (int c = 0; c < C; ++c)
            m.initial[o * C + c] = (class_count[c] + 1.0) / (n + C) *
                                   (first[static_cast<std::size_t>(o) * C + c] + 1.0) / (class_count[c] + b0);

    std::fill(m.transition.begin(), m.transition.end(), 0.0);
    for (int s = 0; s < S; ++s) {
        const int t = m.position_of(s);
        if (t == m.positions - 1) {
            m.transition[static_cast<std::size_t>(s) * S + s] = 1.0;
            continue;
        }
        const int c = s % C;
        const int lo = m.block_offsets[t + 1], hi = m.block_offsets[t + 2];
        for (int o = lo; o < hi; ++o)
            m.transition[static_cast<std::size_t>(s) * S + o * C + c] =
                (trans[static_cast<std::size_t>(s) * m.symbols + o] + 1.0) / (out[s] + (hi - lo));
    }
    m.trained = true;
    return m;
}

namespace {

void check_symbol(const HmmModel& m, int o) {
    if (o < 0 || o >= m.symbols)
        throw std::invalid_argument("observation " + std::to_string(o) + " outside the alphabet");
}

double normalize(std::vector<double>& v) {
    const double sum = std::accumulate(v.begin(), v.end(), 0.0);
    if (!(sum > 0.0))
        throw std::domain_error("observation sequence has zero probability under the model");
    for (auto& x : v)
        x /= sum;
    return sum;
}

void step_into(const HmmModel& m, const std::vector<double>& prev, int o, std::vector<double>& next) {
    const int S = m.states;
    next.assign(S, 0.0);
    for (int i = 0; i < S; ++i) {
        const double ai = prev[i];
        if (ai == 0.0)
            continue;
        const double* row = &m.transition[static_cast<std::size_t>(i) * S];
        const auto [lo, hi] = m.successor_range(i);
        for (int j = lo; j < hi; ++j)
            next[j] += ai * row[j];
    }
    for (int j = 0; j < S; ++j)
        next[j] *= m.b(j, o);
}

int best_class_of(const HmmModel& m, const std::vector<double>& post) {
    std::vector<double> mass(m.classes, 0.0);
    for (int s = 0; s < m.states; ++s)
        mass[m.state_class[s]] += post[s];
    return static_cast<int>(std::max_element(mass.begin(), mass.end()) - mass.begin());
}

} // namespace

double forward(const HmmModel& m, std::span<const int> obs, std::vector<std::vector<double>>* alpha) {
    if (obs.empty())
        throw std::invalid_argument("forward needs at least one observation");
    std::vector<double> cur(m.states);
    check_symbol(m, obs[0]);
    for (int s = 0; s < m.states; ++s)
        cur[s] = m.initial[s] * m.b(s, obs[0]);
    double loglik = std::log(normalize(cur));
    if (alpha) {
        alpha->clear();
        alpha->push_back(cur);
    }
    std::vector<double> next;
    for (std::size_t t = 1; t < obs.size(); ++t) {
        check_symbol(m, obs[t]);
        step_into(m, cur, obs[t], next);
        loglik += std::log(normalize(next));
        cur.swap(next);
        if (alpha)
            alpha->push_back(cur);
    }
    return loglik;
}

Prediction predict_hmm(const HmmModel& m, std::span<const int> prefix) {
    const auto start = std::chrono::steady_clock::now();
    if (prefix.empty())
        throw std::invalid_argument("cannot predict from an empty prefix");
    std::vector<std::vector<double>> alpha;
    forward(m, prefix, &alpha);
    const int label = best_class_of(m, alpha.back());
    const auto stop = std::chrono::steady_clock::now();
    return {label, std::chrono::duration_cast<std::chrono::nanoseconds>(stop - start).count()};
}

void HmmFilter::observe(int symbol) {
    const auto& m = *model_;
    check_symbol(m, symbol);
    if (alpha_.empty()) {
        alpha_.resize(m.states);
        for (int s = 0; s < m.states; ++s)
            alpha_[s] = m.initial[s] * m.b(s, symbol);
    } else {
        std::vector<double> next;
        step_into(m, alpha_, symbol, next);
        alpha_.swap(next);
    }
    normalize(alpha_);
}

int HmmFilter::best_class() const {
    if (alpha_.empty())
        throw std::logic_error("filter has not observed anything");
    return best_class_of(*model_, alpha_);
}

void save_hmm(std::ostream& out, const HmmModel& m) {
    m.check();
    out << "hmm v1\ndims " << m.states << ' ' << m.symbols << ' ' << m.classes << ' ' << m.positions << '\n';
    out << "trained " << (m.trained ? 1 : 0) << "\nstate_class ";
    detail::write_values(out, m.state_class);
    out << '\n';
    if (m.positions > 0) {
        out << "block_offsets ";
        detail::write_values(out, m.block_offsets);
        out << '\n';
    }
    out << "initial ";
    detail::write_values(out, m.initial);
    out << "\ntransition\n";
    for (int s = 0; s < m.states; ++s) {
        detail::write_values(out, std::span<const double>(m.transition).subspan(static_cast<std::size_t>(s) * m.states,
                                                                               m.states));
        out << '\n';
    }
    out << "emission\n";
    for (int s = 0; s < m.states; ++s) {
        detail::write_values(out, std::span<const double>(m.emission).subspan(static_cast<std::size_t>(s) * m.symbols,
                                                                             m.symbols));
        out << '\n';
    }
}

HmmModel load_hmm(std::istream& in) {
    detail::TokenReader r(in);
    r.expect("hmm");
    r.expect("v1");
    r.expect("dims");
    HmmModel m;
    m.states = r.value<int>();
    m.symbols = r.value<int>();
    m.classes = r.value<int>();
    m.positions = r.value<int>();
    if (m.states < 1 || m.symbols < 1 || m.classes < 1 || m.positions < 0)
        throw std::invalid_argument("bad hmm dimensions");
    r.expect("trained");
    m.trained = r.value<int>() != 0;
    r.expect("state_class");
    m.state_class = r.values<int>(m.states);
    if (m.positions > 0) {
        r.expect("block_offsets");
        m.block_offsets = r.values<int>(static_cast<std::size_t>(m.positions) + 1);
    }
    r.expect("initial");
    m.initial = r.values<double>(m.states);
    r.expect("transition");
    m.transition = r.values<double>(static_cast<std::size_t>(m.states) * m.states);
    r.expect("emission");
    m.emission = r.values<double>(static_cast<std::size_t>(m.states) * m.symbols);
    m.check(1e-9);
    return m;
}

} // namespace intuition::baselines
