#pragma once

#include <string>
#include <string_view>

#include "toollink/corpus.hpp"

namespace toollink {

// Parses standoff annotations against their text. Only text-bound lines
// ("T<id>\t<label> <start> <end>\t<surface>") produce mentions; attribute,
// relation, event and note lines are skipped. Discontinuous spans
// (semicolon-separated fragments) are rejected.
//
// Throws ParseError for malformed lines or out-of-range offsets and
// IntegrityError when the recorded surface disagrees with the text.
AnnotatedDocument parse_brat(std::string_view text_content,
                             std::string_view ann_content, std::string doc_id,
                             Modality modality);

// Emits T-lines sorted by (start, end, label), renumbered T1..Tn. Newlines in
// surfaces are written as spaces, per the standoff convention; parse_brat
// undoes this by re-slicing the text.
std::string write_brat(const AnnotatedDocument& doc);

}  // namespace toollink
