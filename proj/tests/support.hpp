#ifndef GSO_TEST_SUPPORT_HPP
#define GSO_TEST_SUPPORT_HPP

#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>

#include <unistd.h>

#include "gso/rng.hpp"

namespace gso::test {

// A fresh scratch directory under the system temp dir, removed on exit.
class TempDir {
public:
  TempDir()
  {
    static int counter = 0;
    path_ = std::filesystem::temp_directory_path() /
            ("gso_test_" + std::to_string(::getpid()) + "_" + std::to_string(counter++));
    std::filesystem::create_directories(path_);
  }
  ~TempDir() { std::filesystem::remove_all(path_); }
  TempDir(const TempDir&) = delete;
  TempDir& operator=(const TempDir&) = delete;

  std::filesystem::path file(const std::string& name) const { return path_ / name; }

private:
  std::filesystem::path path_;
};

inline void write_text(const std::filesystem::path& p, const std::string& text)
{
  std::ofstream(p) << text;
}

inline std::string read_text(const std::filesystem::path& p)
{
  std::ifstream in(p, std::ios::binary);
  std::ostringstream s;
  s << in.rdbuf();
  return s.str();
}

}  // namespace gso::test

#endif  // GSO_TEST_SUPPORT_HPP
