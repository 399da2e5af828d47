#pragma once

#include "intuition/core_model.hpp"

#include <iosfwd>
#include <string>

namespace intuition {

// Experience sets as text, one element per line:
//
//   id <TAB> domain_tag <TAB> payload <TAB> priority <TAB> importance_ip <TAB>
//   importance_np <TAB> confidence <TAB> first_seen <TAB> revision_count
//
// payload is `num:<value>` (shortest round-trip decimal) or
// `sym:<ordinal>:<alphabet_size>:<label>`. Inside id, tag and label, a
// backslash escapes itself, `\t` is a tab and `\n` a newline. Lines starting
// with '#' and blank lines are ignored. The first line written is the
// header `# intuition-experience v1`.

class ExperienceFormatError : public std::runtime_error {
public:
    ExperienceFormatError(std::size_t line, const std::string& what);
    std::size_t line() const noexcept { return line_; }

private:
    std::size_t line_;
};

void write_experience_set(std::ostream& out, const ExperienceSet& set);
ExperienceSet read_experience_set(std::istream& in);

std::string format_payload(const Payload& p);
Payload parse_payload(std::string_view text);

} // namespace intuition
