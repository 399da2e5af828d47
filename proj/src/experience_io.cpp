#include "intuition/experience_io.hpp"

#include <charconv>
#include <istream>
#include <ostream>
#include <vector>

namespace intuition {

namespace {

std::string escape(std::string_view s) {
    std::string out;
    out.reserve(s.size());
    for (char c : s) {
        switch (c) {
        case '\\': out += "\\\\"; break;
        case '\t': out += "\\t"; break;
        case '\n': out += "\\n"; break;
        default: out += c;
        }
    }
    return out;
}

std::string unescape(std::string_view s) {
    std::string out;
    out.reserve(s.size());
    for (std::size_t i = 0; i < s.size(); ++i) {
        if (s[i] != '\\') {
            out += s[i];
            continue;
        }
        if (++i == s.size())
            throw std::invalid_argument("dangling escape");
        switch (s[i]) {
        case '\\': out += '\\'; break;
        case 't': out += '\t'; break;
        case 'n': out += '\n'; break;
        default: throw std::invalid_argument(std::string("unknown escape \\") + s[i]);
        }
    }
    return out;
}

template <typename T>
T parse_number(std::string_view s, const char* what) {
    T v{};
    auto [p, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
    if (ec != std::errc{} || p != s.data() + s.size())
        throw std::invalid_argument(std::string("bad ") + what + " '" + std::string(s) + "'");
    return v;
}

std::vector<std::string_view> split_tabs(std::string_view line) {
    std::vector<std::string_view> out;
    std::size_t start = 0;
    for (;;) {
        auto tab = line.find('\t', start);
        out.push_back(line.substr(start, tab - start));
        if (tab == std::string_view::npos)
            break;
        start = tab + 1;
    }
    return out;
}

} // namespace

ExperienceFormatError::ExperienceFormatError(std::size_t line, const std::string& what)
    : std::runtime_error("experience line " + std::to_string(line) + ": " + what), line_(line) {}

std::string format_payload(const Payload& p) {
    if (const auto* s = std::get_if<Symbol>(&p))
        return "sym:" + std::to_string(s->ordinal_index) + ":" + std::to_string(s->alphabet_size) + ":" +
               escape(s->label);
    char buf[64];
    auto [end, ec] = std::to_chars(buf, buf + sizeof buf, std::get<double>(p));
    return "num:" + std::string(buf, end);
}

Payload parse_payload(std::string_view text) {
    if (text.starts_with("num:"))
        return parse_number<double>(text.substr(4), "numeric payload");
    if (!text.starts_with("sym:"))
        throw std::invalid_argument("payload must start with num: or sym:");
    auto rest = text.substr(4);
    const auto c1 = rest.find(':');
    const auto c2 = c1 == std::string_view::npos ? c1 : rest.find(':', c1 + 1);
    if (c2 == std::string_view::npos)
        throw std::invalid_argument("symbolic payload needs ordinal:alphabet:label");
    const int ordinal = parse_number<int>(rest.substr(0, c1), "ordinal");
    const int alphabet = parse_number<int>(rest.substr(c1 + 1, c2 - c1 - 1), "alphabet size");
    return Symbol(unescape(rest.substr(c2 + 1)), ordinal, alphabet);
}

void write_experience_set(std::ostream& out, const ExperienceSet& set) {
    out << "# intuition-experience v1\n";
    for (const auto& e : set.elements()) {
        out << escape(e.id) << '\t' << escape(e.domain_tag) << '\t' << format_payload(e.value) << '\t'
            << e.priority.value() << '\t' << e.importance_ip.value() << '\t' << e.importance_np.value() << '\t'
            << e.confidence.value() << '\t' << e.first_seen << '\t' << e.revision_count << '\n';
    }
}

ExperienceSet read_experience_set(std::istream& in) {
    ExperienceSet set;
    std::string line;
    std::size_t lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        if (!line.empty() && line.back() == '\r')
            line.pop_back();
        if (line.empty() || line.front() == '#')
            continue;
        const auto f = split_tabs(line);
        if (f.size() != 9)
            throw ExperienceFormatError(lineno, "expected 9 fields, got " + std::to_string(f.size()));
        try {
            ExperienceElement e{
                .id = unescape(f[0]),
                .domain_tag = unescape(f[1]),
                .value = parse_payload(f[2]),
                .priority = ScaledScore(parse_number<int>(f[3], "priority")),
                .importance_ip = ScaledScore(parse_number<int>(f[4], "importance_ip")),
                .importance_np = ScaledScore(parse_number<int>(f[5], "importance_np")),
                .confidence = ScaledScore(parse_number<int>(f[6], "confidence")),
                .first_seen = parse_number<std::uint64_t>(f[7], "first_seen"),
                .revision_count = parse_number<int>(f[8], "revision_count"),
            };
            set.add(std::move(e));
        } catch (const std::exception& ex) {
            throw ExperienceFormatError(lineno, ex.what());
        }
    }
    return set;
}

} // namespace intuition
