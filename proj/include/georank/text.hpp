#pragma once

#include <string>
#include <string_view>
#include <vector>

namespace georank::text {

/// Lowercased alphanumeric word tokens, in order of appearance.
std::vector<std::string> tokenize(std::string_view s);

/// Sentence units, split on ./?/!/newline, trimmed, empties dropped.
std::vector<std::string> split_sentences(std::string_view s);

/// True if the token matches a spatial cue (near, along, within, in, around,
/// close, walk, block, radius, exit, route — inflected forms included where
/// they are unambiguous).
bool is_spatial_cue(std::string_view token);

/// True if the token matches a semantic preference cue (food, price, quality,
/// activity vocabulary).
bool is_semantic_cue(std::string_view token);

/// Number of spatial cue tokens in the text.
int count_spatial_cues(std::string_view s);

/// Number of semantic cue tokens in the text.
int count_semantic_cues(std::string_view s);

/// Abstract text-to-text transform isolating the spatial or the semantic
/// portion of a description. Outputs are built from whole sentence units of
/// the input.
class MaskingView {
 public:
  virtual ~MaskingView() = default;
  virtual std::string spatial_view(const std::string& s) const = 0;
  virtual std::string semantic_view(const std::string& s) const = 0;
};

/// Deterministic masker: sentences containing a spatial cue token form the
/// spatial view, the remaining sentences form the semantic view.
class LexiconMasker : public MaskingView {
 public:
  std::string spatial_view(const std::string& s) const override;
  std::string semantic_view(const std::string& s) const override;
};

}  // namespace georank::text
