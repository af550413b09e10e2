#include "artifacts.hpp"

#include <fstream>
#include <sstream>
#include <system_error>

#include <unistd.h>

namespace gaecli {

namespace fs = std::filesystem;

ArtifactSet::ArtifactSet(fs::path dir) : dir_(std::move(dir)) {}

ArtifactSet::~ArtifactSet() {
  for (const Entry& e : staged_) {
    std::error_code ec;
    fs::remove(e.temp, ec);
  }
}

fs::path ArtifactSet::stage(const std::string& name, const std::function<void(std::ostream&)>& write) {
  const fs::path final = fs::path(name).is_absolute() ? fs::path(name) : dir_ / name;
  if (final.has_parent_path()) fs::create_directories(final.parent_path());
  fs::path temp = final;
  temp += ".tmp." + std::to_string(::getpid());
  staged_.push_back({temp, final});
  std::ofstream out(temp, std::ios::binary | std::ios::trunc);
  if (!out) throw gae::InvalidArgument("cannot write '" + temp.string() + "'");
  write(out);
  out.flush();
  if (!out) throw gae::InvalidArgument("write failed for '" + final.string() + "'");
  return final;
}

std::vector<fs::path> ArtifactSet::commit() {
  std::vector<fs::path> out;
  for (const Entry& e : staged_) {
    fs::rename(e.temp, e.final);
    out.push_back(e.final);
  }
  staged_.clear();
  return out;
}

fs::path write_atomic(const fs::path& path, const std::function<void(std::ostream&)>& write) {
  ArtifactSet set(fs::current_path());
  set.stage(fs::absolute(path).string(), write);
  return set.commit().front();
}

void write_embeddings(std::ostream& out, const gae::Matrix& z) {
  for (Eigen::Index i = 0; i < z.rows(); ++i) {
    out << i;
    for (Eigen::Index j = 0; j < z.cols(); ++j) out << '\t' << gae::format_double(z(i, j));
    out << '\n';
  }
}

std::string read_text_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw gae::InvalidArgument("cannot open '" + path + "'");
  std::stringstream buf;
  buf << in.rdbuf();
  return buf.str();
}

}  // namespace gaecli
