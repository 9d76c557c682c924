#ifndef TUMORLIN_CSVIO_HPP
#define TUMORLIN_CSVIO_HPP

#include <string>

namespace tumorlin {

// Write-temp-then-rename; parent directories are created. Content goes out
// byte-for-byte (LF endings come from the producers).
void atomic_write(const std::string& path, const std::string& content);

} // namespace tumorlin

#endif
