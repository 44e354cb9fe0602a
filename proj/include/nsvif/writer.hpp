#pragma once

// Scripted output generator for benchmark synthesis without a model. It
// reads the constraints it is shown and writes a markdown document that
// satisfies them; whatever it is not told falls back to defaults (no title,
// about 120 body words, long sentences, different first and last words)
// that tend to break the missing constraints.

#include <string>
#include <vector>

#include "nsvif/model.hpp"
#include "nsvif/synth.hpp"

namespace nsvif {

struct WriterOptions {
  /// Also break the constraint an unsat round omitted, when the request
  /// names it. Gives a generator that always reaches its round's target.
  bool violate_omitted = false;
};

class TemplateWriter : public OutputGenerator {
 public:
  explicit TemplateWriter(WriterOptions options = {}) : options_(options) {}
  std::string generate(const GenerationRequest& request) override;

 private:
  WriterOptions options_;
};

/// Document satisfying every logic constraint in `constraints` (semantic ones
/// are ignored). `variant` shifts the filler vocabulary.
std::string compose_compliant_text(const std::vector<Constraint>& constraints, std::uint64_t variant = 0);

}  // namespace nsvif
