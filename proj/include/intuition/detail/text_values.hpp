#pragma once

#include <charconv>
#include <istream>
#include <ostream>
#include <span>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

namespace intuition::detail {

template <typename T>
T parse_value(std::string_view s) {
    T v{};
    auto [p, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
    if (ec != std::errc{} || p != s.data() + s.size())
        throw std::invalid_argument("cannot parse '" + std::string(s) + "'");
    return v;
}

inline void write_double(std::ostream& out, double v) {
    char buf[64];
    auto [end, ec] = std::to_chars(buf, buf + sizeof buf, v);
    out.write(buf, end - buf);
}

template <typename T>
void write_values(std::ostream& out, std::span<const T> values) {
    for (std::size_t i = 0; i < values.size(); ++i) {
        if (i)
            out << ' ';
        if constexpr (std::is_floating_point_v<T>)
            write_double(out, values[i]);
        else
            out << values[i];
    }
}

template <typename T>
void write_values(std::ostream& out, const std::vector<T>& values) {
    write_values(out, std::span<const T>(values));
}

// Whitespace-separated token stream for the model text formats.
class TokenReader {
public:
    explicit TokenReader(std::istream& in) : in_(in) {}

    std::string next() {
        std::string tok;
        if (!(in_ >> tok))
            throw std::invalid_argument("unexpected end of model text");
        return tok;
    }

    void expect(std::string_view keyword) {
        const auto tok = next();
        if (tok != keyword)
            throw std::invalid_argument("expected '" + std::string(keyword) + "', found '" + tok + "'");
    }

    template <typename T>
    T value() {
        return parse_value<T>(next());
    }

    template <typename T>
    std::vector<T> values(std::size_t n) {
        std::vector<T> out;
        out.reserve(n);
        for (std::size_t i = 0; i < n; ++i)
            out.push_back(value<T>());
        return out;
    }

private:
    std::istream& in_;
};

} // namespace intuition::detail
