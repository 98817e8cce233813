#pragma once

#include <string>

namespace physnav {

/// Whole-file read; throws ParseError when the file cannot be opened.
std::string read_file(const std::string& path);
/// Writes to `path` via a temporary sibling and a rename, so readers never
/// see a partial file. Throws Error on failure.
void write_file_atomic(const std::string& path, const std::string& contents);

}  // namespace physnav
