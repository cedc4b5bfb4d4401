#ifndef LEXCHAIN_PREPROCESS_HPP
#define LEXCHAIN_PREPROCESS_HPP

#include <string>
#include <string_view>
#include <vector>

namespace lexchain {

// Lowercase, strip punctuation, drop stopwords; surface order preserved.
// Intra-word apostrophes separate, so possessives lose their "s" to the
// stopword list ("grandpa's" -> grandpa).
std::vector<std::string> preprocess(std::string_view text);

// The classic 127-word English stopword list, embedded for reproducibility.
const std::vector<std::string>& stopword_list();
bool is_stopword(std::string_view token);

}  // namespace lexchain

#endif
