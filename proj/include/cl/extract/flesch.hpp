#pragma once

#include <cstddef>
#include <string_view>

namespace cl::extract {

struct TextCounts {
    std::size_t sentences = 0;
    std::size_t words = 0;
    std::size_t syllables = 0;
};

// words: maximal ASCII-alphabetic runs. syllables: vowel groups (aeiouy),
// at least one per word. sentences: segments between runs of . ! ? that
// contain a word (at least one when any word exists).
TextCounts count_text(std::string_view text);

// 206.835 - 1.015 * words/sentences - 84.6 * syllables/words.
// Text without words scores 0.0.
double flesch_reading_ease(std::string_view text);

}  // namespace cl::extract
