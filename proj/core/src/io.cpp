#include "bwf/io.hpp"

#include <cstdint>
#include <fstream>
#include <iomanip>
#include <sstream>

#include "bwf/errors.hpp"

namespace bwf {

static_assert(sizeof(double) == 8, "dump format requires IEEE-754 float64");

void write_field_dump(const std::string& path, const VectorField& f) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw Error(ErrorKind::io, "dump", "cannot open '" + path + "' for writing");
  const Grid& g = f.grid;
  out << std::setprecision(17) << "BWF1 " << g.nx << ' ' << g.ny << ' ' << g.nlev() << ' '
      << g.d << ' ' << g.lat.lambda1.x << ' ' << g.lat.lambda1.y << ' ' << g.lat.lambda2.x
      << ' ' << g.lat.lambda2.y << '\n';
  out.write(reinterpret_cast<const char*>(f.v.data()),
            static_cast<std::streamsize>(f.v.size() * sizeof(double)));
  if (!out) throw Error(ErrorKind::io, "dump", "short write to '" + path + "'");
}

VectorField read_field_dump(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error(ErrorKind::io, "dump", "cannot open '" + path + "'");
  std::string header;
  if (!std::getline(in, header)) throw Error(ErrorKind::io, "dump", "missing header line");

  std::istringstream hs(header);
  std::string magic;
  int nx = 0, ny = 0, nlev = 0;
  double d = 0.0, l1x = 0.0, l1y = 0.0, l2x = 0.0, l2y = 0.0;
  hs >> magic >> nx >> ny >> nlev >> d >> l1x >> l1y >> l2x >> l2y;
  if (!hs || magic != "BWF1")
    throw Error(ErrorKind::io, "dump", "'" + path + "' is not a BWF1 field dump");

  const Grid g = Grid::make(Lattice::make({l1x, l1y}, {l2x, l2y}), nx, ny, nlev - 1, d);
  VectorField f(g);
  in.read(reinterpret_cast<char*>(f.v.data()),
          static_cast<std::streamsize>(f.v.size() * sizeof(double)));
  if (in.gcount() != static_cast<std::streamsize>(f.v.size() * sizeof(double)))
    throw Error(ErrorKind::io, "dump", "truncated payload in '" + path + "'");
  return f;
}

void write_field_csv(const std::string& path, const VectorField& f) {
  std::ofstream out(path);
  if (!out) throw Error(ErrorKind::io, "dump", "cannot open '" + path + "' for writing");
  const Grid& g = f.grid;
  out << "i,j,k,X,Y,Z,u1,u2,u3\n" << std::setprecision(17);
  for (int k = 0; k <= g.nz; ++k)
    for (int j = 0; j < g.ny; ++j)
      for (int i = 0; i < g.nx; ++i) {
        const Vec3 X = g.ref_point(i, j, k);
        const Vec3 u = f.vec_at(i, j, k);
        out << i << ',' << j << ',' << k << ',' << X.x << ',' << X.y << ',' << X.z << ','
            << u.x << ',' << u.y << ',' << u.z << '\n';
      }
  if (!out) throw Error(ErrorKind::io, "dump", "short write to '" + path + "'");
}

}  // namespace bwf
