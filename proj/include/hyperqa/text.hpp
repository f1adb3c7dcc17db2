#pragma once

#include <cstddef>
#include <string>
#include <string_view>
#include <vector>

namespace hyperqa::text {

std::string to_lower(std::string_view s);
std::string trim(std::string_view s);

// Collapse every run of whitespace to a single space (no leading/trailing).
std::string collapse_whitespace(std::string_view s);

// Canonical entity key: casefold + trim + whitespace collapse.
std::string normalize(std::string_view s);

// "clothing line" -> "Clothing Line". Used for entity-type labels.
std::string title_case(std::string_view s);

std::vector<std::string> split(std::string_view s, char delim);
std::vector<std::string> split_whitespace(std::string_view s);
std::size_t whitespace_token_count(std::string_view s);

bool iequals(std::string_view a, std::string_view b);
bool istarts_with(std::string_view s, std::string_view prefix);
bool contains(std::string_view haystack, std::string_view needle);

// Replace every "{name}" placeholder; unknown placeholders are left alone.
std::string render_template(std::string_view tmpl,
                            const std::vector<std::pair<std::string, std::string>>& slots);

}  // namespace hyperqa::text
