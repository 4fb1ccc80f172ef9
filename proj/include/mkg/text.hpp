#pragma once

// Small string helpers shared across modules. ASCII-only case handling.

#include <cstdint>
#include <string>
#include <string_view>
#include <vector>

namespace mkg::text {

std::string_view trim(std::string_view s);
std::string to_lower(std::string_view s);
bool iequals(std::string_view a, std::string_view b);
std::vector<std::string> split(std::string_view s, char sep);

// Collapse runs of ASCII whitespace to one space and trim both ends.
std::string collapse_whitespace(std::string_view s);

// Lowercase, split on every non-alphanumeric byte. Bytes >= 0x80 are kept
// inside tokens so UTF-8 words survive.
std::vector<std::string> tokenize(std::string_view s);

// Reversible percent-encoding. Bytes for which `keep` returns true are
// written verbatim; '%' is always encoded.
std::string percent_encode(std::string_view s, bool (*keep)(unsigned char));
std::string percent_decode(std::string_view s);
bool is_unreserved(unsigned char c);

// RFC 4180 field quoting.
std::string csv_escape(std::string_view field);
// Splits one CSV line; returns false on unbalanced quotes.
bool csv_split(std::string_view line, std::vector<std::string>& out);

std::uint64_t fnv1a(std::string_view s, std::uint64_t seed = 0);

}  // namespace mkg::text
