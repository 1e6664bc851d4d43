#pragma once

#include <string>
#include <string_view>

namespace vpoem::utf8 {

/// Decodes UTF-8; invalid bytes become U+FFFD.
std::u32string decode(std::string_view text);
std::string encode(std::u32string_view text);
void append(std::string& out, char32_t cp);

bool is_space(char32_t cp);
/// Punctuation and symbols stripped from token edges.
bool is_punctuation(char32_t cp);

/// Removes leading/trailing whitespace.
std::string_view trim(std::string_view text);

}  // namespace vpoem::utf8
