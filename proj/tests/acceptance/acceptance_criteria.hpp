#pragma once

#include <iosfwd>

namespace flatband {
class ResultStore;
namespace acceptance {

// Runs the acceptance criteria, printing one pass/fail line per criterion.
// Returns the number of failed criteria.  `fast` shrinks truncations for a
// quick smoke run (not the acceptance gate).  When `store` is given, an
// oracle_report.csv with the cross-validation records is emitted.
int run_all(std::ostream& out, bool fast, flatband::ResultStore* store);

}  // namespace acceptance
}  // namespace flatband
