#pragma once

#include <stdexcept>
#include <string>

namespace toollink {

// Malformed input data: bad KB records, bad annotation lines, bad TSV rows.
class ParseError : public std::runtime_error {
public:
  using std::runtime_error::runtime_error;
};

// An annotation disagrees with the text it points into (offset/surface drift).
class IntegrityError : public std::runtime_error {
public:
  using std::runtime_error::runtime_error;
};

// Caller mistakes: mismatched workflow ids, unknown document ids, invalid
// configuration. Distinct from data errors so the CLI can map exit codes.
class UsageError : public std::runtime_error {
public:
  using std::runtime_error::runtime_error;
};

}  // namespace toollink
