// Drives the installed binary end to end and checks the documented exit
// codes: 0 success, 2 config error, 3 I/O error. The binary path arrives in
// TWQKD_BIN (set by the test harness).

#include <cstdio>
#include <cstdlib>
#include <iostream>
#include <string>
#include <sys/wait.h>

namespace {

int failures = 0;

int run(const std::string& args) {
  const char* bin = std::getenv("TWQKD_BIN");
  if (bin == nullptr) {
    std::cerr << "TWQKD_BIN not set\n";
    return -1;
  }
  const std::string cmd =
      std::string(bin) + " " + args + " > /dev/null 2> /dev/null";
  const int status = std::system(cmd.c_str());
  if (status == -1 || !WIFEXITED(status)) return -1;
  return WEXITSTATUS(status);
}

void expect_exit(const std::string& args, int expected) {
  const int got = run(args);
  if (got != expected) {
    std::cerr << "FAIL: '" << args << "' exited " << got << ", expected "
              << expected << "\n";
    ++failures;
  }
}

}  // namespace

int main() {
  expect_exit("--rounds 2000 --seed 3", 0);
  expect_exit("--preset delay-photon-both --rounds 500 --exact", 0);
  expect_exit("--rounds 500 --output csv --out /tmp/twqkd_exit_test.csv", 0);
  expect_exit("--help", 0);

  expect_exit("--check-fraction 1.5", 2);
  expect_exit("--no-such-flag", 2);
  expect_exit("--preset bogus-preset", 2);
  expect_exit("--preset delay-photon-both --attack honest", 2);
  expect_exit("--rounds 0", 2);

  expect_exit("--rounds 200 --out /nonexistent-dir/report.json", 3);

  std::remove("/tmp/twqkd_exit_test.csv");
  if (failures == 0) std::cout << "all exit-code checks passed\n";
  return failures == 0 ? 0 : 1;
}
