#pragma once

#include <filesystem>
#include <functional>
#include <iosfwd>
#include <string>
#include <vector>

#include "gae/common.hpp"

namespace gaecli {

/// Stages output files next to their destinations and renames them into place
/// on commit. Staged files left uncommitted are removed on destruction, so a
/// failed command never leaves partial artifacts behind.
class ArtifactSet {
 public:
  explicit ArtifactSet(std::filesystem::path dir);
  ~ArtifactSet();

  ArtifactSet(const ArtifactSet&) = delete;
  ArtifactSet& operator=(const ArtifactSet&) = delete;

  /// Writes `name` (relative to the directory, or absolute) into a temp file.
  std::filesystem::path stage(const std::string& name, const std::function<void(std::ostream&)>& write);

  /// Renames every staged file to its final path; returns the final paths.
  std::vector<std::filesystem::path> commit();

 private:
  struct Entry {
    std::filesystem::path temp;
    std::filesystem::path final;
  };

  std::filesystem::path dir_;
  std::vector<Entry> staged_;
};

/// Writes one file atomically.
std::filesystem::path write_atomic(const std::filesystem::path& path, const std::function<void(std::ostream&)>& write);

/// "node<TAB>v1<TAB>...<TAB>vd", one row per node.
void write_embeddings(std::ostream& out, const gae::Matrix& z);

std::string read_text_file(const std::string& path);

}  // namespace gaecli
