#include "cl/extract/flesch.hpp"

#include <cctype>

namespace cl::extract {

namespace {
bool is_vowel(char c) {
    switch (std::tolower(static_cast<unsigned char>(c))) {
        case 'a': case 'e': case 'i': case 'o': case 'u': case 'y': return true;
        default: return false;
    }
}
bool is_alpha(char c) { return std::isalpha(static_cast<unsigned char>(c)) != 0; }
bool is_terminator(char c) { return c == '.' || c == '!' || c == '?'; }
}  // namespace

TextCounts count_text(std::string_view text) {
    TextCounts counts;
    bool segment_has_word = false;
    std::size_t i = 0;
    while (i < text.size()) {
        const char c = text[i];
        if (is_alpha(c)) {
            std::size_t groups = 0;
            bool in_vowels = false;
            while (i < text.size() && is_alpha(text[i])) {
                const bool v = is_vowel(text[i]);
                if (v && !in_vowels) ++groups;
                in_vowels = v;
                ++i;
            }
            ++counts.words;
            counts.syllables += groups == 0 ? 1 : groups;
            segment_has_word = true;
            continue;
        }
        if (is_terminator(c)) {
            if (segment_has_word) ++counts.sentences;
            segment_has_word = false;
        }
        ++i;
    }
    if (segment_has_word) ++counts.sentences;
    return counts;
}

double flesch_reading_ease(std::string_view text) {
    const auto c = count_text(text);
    if (c.words == 0) return 0.0;
    const double words = static_cast<double>(c.words);
    return 206.835 - 1.015 * (words / static_cast<double>(c.sentences)) -
           84.6 * (static_cast<double>(c.syllables) / words);
}

}  // namespace cl::extract
