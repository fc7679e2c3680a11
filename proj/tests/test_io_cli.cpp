#include <catch2/catch_amalgamated.hpp>

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>
#include <sys/wait.h>

#include "vnlab/io.hpp"

using namespace vnlab;
using Catch::Approx;

namespace {

std::string slurp(const std::filesystem::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

struct CliRun {
  int exit_code = -1;
  std::string output;  // stdout + stderr
};

CliRun run_cli(const std::string& args) {
  static int counter = 0;
  const auto tmp = std::filesystem::temp_directory_path() /
                   ("vnlab_cli_" + std::to_string(++counter) + ".out");
  const std::string cmd =
      std::string(VNLAB_CLI_PATH) + " " + args + " > " + tmp.string() + " 2>&1";
  const int raw = std::system(cmd.c_str());
  CliRun r;
  r.exit_code = WIFEXITED(raw) ? WEXITSTATUS(raw) : -1;
  r.output = slurp(tmp);
  std::filesystem::remove(tmp);
  return r;
}

const std::string kData = VNLAB_DATA_DIR;

bool same_terms(const MultiPoly& a, const MultiPoly& b) {
  if (a.dim() != b.dim() || a.terms().size() != b.terms().size()) return false;
  for (const auto& [idx, c] : a.terms())
    if (std::abs(b.coeff(idx) - c) > 1e-15) return false;
  return true;
}

}  // namespace

TEST_CASE("fmt_g and csv_join format plainly") {
  CHECK(fmt_g(0.5) == "0.5");
  CHECK(fmt_g(-3.0) == "-3");
  CHECK(fmt_g(1.0 / 3.0) == "0.333333333333");
  CHECK(csv_join({"a", "b", "3"}) == "a,b,3");
  CHECK(csv_join({}) == "");
}

TEST_CASE("text polynomials parse with comments and round numbers") {
  std::istringstream in(
      "# two-variable example\n"
      "0 0  1.0 0.0\n"
      "2 1  -0.5 0.25  # trailing note\n"
      "\n");
  MultiPoly p = parse_poly_text(in);
  CHECK(p.dim() == 2);
  CHECK(p.coeff({0, 0}) == cplx(1.0));
  CHECK(p.coeff({2, 1}) == cplx(-0.5, 0.25));
}

TEST_CASE("text polynomial parser rejects malformed rows") {
  auto bad = [](const char* text) {
    std::istringstream in(text);
    CHECK_THROWS_AS(parse_poly_text(in), std::invalid_argument);
  };
  bad("");
  bad("# only comments\n");
  bad("0 0 1 x\n");        // non-numeric token
  bad("1 0 1 0\n0 1 0\n");  // inconsistent columns
  bad("-1 0 1 0\n");        // negative exponent
  bad("0.5 0 1 0\n");       // fractional exponent
  bad("1 0\n");             // no room for re/im
}

TEST_CASE("json polynomials parse and default the imaginary part") {
  json j = {{"dim", 2},
            {"terms", json::array({{{"alpha", {1, 0}}, {"re", 2.0}},
                                   {{"alpha", {0, 3}},
                                    {"re", 0.0},
                                    {"im", -1.0}}})}};
  MultiPoly p = poly_from_json(j);
  CHECK(p.coeff({1, 0}) == cplx(2.0));
  CHECK(p.coeff({0, 3}) == cplx(0.0, -1.0));

  CHECK_THROWS_AS(poly_from_json(json{{"terms", json::array()}}),
                  std::invalid_argument);
  CHECK_THROWS_AS(poly_from_json(json{{"dim", 0}, {"terms", json::array()}}),
                  std::invalid_argument);
  json wrong_alpha = {{"dim", 2},
                      {"terms", json::array({{{"alpha", {1}}, {"re", 1.0}}})}};
  CHECK_THROWS_AS(poly_from_json(wrong_alpha), std::invalid_argument);
  json neg = {{"dim", 1},
              {"terms", json::array({{{"alpha", {-1}}, {"re", 1.0}}})}};
  CHECK_THROWS_AS(poly_from_json(neg), std::invalid_argument);
}

TEST_CASE("read_poly sniffs json by the leading brace") {
  std::istringstream as_json(
      "  \n {\"dim\": 1, \"terms\": [{\"alpha\": [2], \"re\": 1.0}]}");
  CHECK(read_poly(as_json).coeff({2}) == cplx(1.0));

  std::istringstream as_text("2 1 0\n");
  CHECK(read_poly(as_text).coeff({2}) == cplx(1.0));
}

TEST_CASE("polynomial json round-trip preserves every term") {
  MultiPoly p(3);
  p.add_term({1, 2, 0}, cplx(0.125, -7.0));
  p.add_term({0, 0, 5}, cplx(3.0, 0.0));
  CHECK(same_terms(poly_from_json(poly_to_json(p)), p));
}

TEST_CASE("matrix json round-trip, with im optional on input") {
  Mat M(2, 3);
  for (int i = 0; i < 2; ++i)
    for (int k = 0; k < 3; ++k) M(i, k) = cplx(i + 0.5, k - 1.0);
  Mat back = matrix_from_json(matrix_to_json(M));
  REQUIRE(back.rows() == 2);
  REQUIRE(back.cols() == 3);
  CHECK(operator_norm(M - back) == 0.0);

  json real_only = {{"rows", 1}, {"cols", 2}, {"re", {{1.0, 2.0}}}};
  Mat R = matrix_from_json(real_only);
  CHECK(R(0, 1) == cplx(2.0));

  json bad_shape = {{"rows", 2}, {"cols", 2}, {"re", {{1.0, 2.0}}}};
  CHECK_THROWS_AS(matrix_from_json(bad_shape), std::invalid_argument);
  json no_re = {{"rows", 1}, {"cols", 1}};
  CHECK_THROWS_AS(matrix_from_json(no_re), std::invalid_argument);
}

TEST_CASE("kernel json round-trip keeps indices and label") {
  KernelProfile K;
  K.label = "window";
  K.set(0, 1.0);
  K.set(4, 0.25);
  KernelProfile back = kernel_from_json(kernel_to_json(K));
  CHECK(back.label == "window");
  CHECK(back.at(0) == 1.0);
  CHECK(back.at(4) == 0.25);
  CHECK(back.at(1) == 0.0);

  CHECK_THROWS_AS(kernel_from_json(json{{"label", "x"}}),
                  std::invalid_argument);
  json bad = {{"coeffs", json::array({json::array({0.5, 1.0})})}};
  CHECK_THROWS_AS(kernel_from_json(bad), std::invalid_argument);
}

TEST_CASE("shipped data files load") {
  MultiPoly gp = read_poly_file(kData + "/gallery_poly.txt");
  CHECK(gp.dim() == 3);
  CHECK(gp.terms().size() == 6);
  CHECK(gp.coeff({1, 1, 0}) == cplx(-2.0));

  MultiPoly sp = read_poly_file(kData + "/sample_poly.json");
  CHECK(sp.dim() == 2);

  KernelProfile K = read_kernel_file(kData + "/sample_kernel.json");
  CHECK(K.at(0) == 1.0);

  FoguelTuple F = read_foguel_file(kData + "/sample_foguel.json");
  CHECK(F.d == 3);
  CHECK(F.trunc == 24);

  CHECK_THROWS_AS(read_poly_file(kData + "/no_such_file.txt"),
                  std::invalid_argument);
}

TEST_CASE("cli: help exits 0 and lists the subcommands") {
  auto r = run_cli("--help");
  CHECK(r.exit_code == 0);
  for (const char* cmd : {"kernel-norms", "kmn", "split", "besov",
                          "foguel-verify", "cdn", "gallery", "vn-random"})
    CHECK(r.output.find(cmd) != std::string::npos);
}

TEST_CASE("cli: usage errors exit 2") {
  CHECK(run_cli("--definitely-not-an-option").exit_code == 2);
  CHECK(run_cli("split").exit_code == 2);  // missing required --poly
  CHECK(run_cli("kmn --format yaml").exit_code == 2);
}

TEST_CASE("cli: unreadable data exits 3") {
  auto r = run_cli("split --poly " + kData + "/no_such_file.txt");
  CHECK(r.exit_code == 3);
  CHECK(r.output.find("error:") != std::string::npos);
}

TEST_CASE("cli: kmn grid emits a commented header and clean csv") {
  auto r = run_cli("kmn --m-max 2 --n-max 4");
  REQUIRE(r.exit_code == 0);
  CHECK(r.output.rfind("# vnlab kmn generated ", 0) == 0);
  std::istringstream lines(r.output);
  std::string line;
  std::getline(lines, line);  // header comment
  std::getline(lines, line);  // column names
  CHECK(line.rfind("m,n,", 0) == 0);
  int rows = 0;
  while (std::getline(lines, line))
    if (!line.empty()) ++rows;
  CHECK(rows == 12);  // m <= min(n, 2), n <= 4
}

TEST_CASE("cli: reruns are byte-identical without the timestamp header") {
  const std::string args =
      "vn-random --d 3 --count 3 --size 6 --seed 11 --no-header";
  auto a = run_cli(args);
  auto b = run_cli(args);
  REQUIRE(a.exit_code == 0);
  CHECK(a.output == b.output);
  CHECK(a.output.find('#') == std::string::npos);
}

TEST_CASE("cli: json output parses and carries the column names") {
  auto r = run_cli("cdn --d 3 --n-max 4 --format json --no-header");
  REQUIRE(r.exit_code == 0);
  json doc = json::parse(r.output);
  CHECK(doc["command"] == "cdn");
  CHECK_FALSE(doc.contains("generated"));
  CHECK(doc["columns"].is_array());
  CHECK(doc["rows"].size() == 4);
}

TEST_CASE("cli: subcommand smokes on the shipped data") {
  CHECK(run_cli("kernel-norms --fejer-max 4 --dyadic-max 4 --trapezoid 1 2 4 8 "
                "--splitting 3 12 24").exit_code == 0);
  CHECK(run_cli("split --poly " + kData + "/gallery_poly.txt").exit_code == 0);
  CHECK(run_cli("besov --poly " + kData + "/lacunary_poly.txt --a 1 --quad 512")
            .exit_code == 0);
  CHECK(run_cli("foguel-verify --tuple " + kData + "/sample_foguel.json" +
                " --poly " + kData + "/sample_poly3.txt").exit_code == 0);
  CHECK(run_cli("gallery --verify").exit_code == 0);
}

TEST_CASE("cli: violated certified invariants exit 4") {
  // band ends swapped: the splitting kernel family rejects d < 3 via the
  // certified-run path only when the sweep itself breaks an invariant, so
  // use vn-random in d <= 2 with an absurd tolerance demand instead.
  auto r = run_cli("vn-random --d 2 --count 2 --size 5 --seed 3 --tol -1");
  CHECK(r.exit_code == 4);
}
