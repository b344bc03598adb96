#include "dske/psk_table.hpp"

#include <filesystem>
#include <random>
#include <set>
#include <thread>

#include "doctest.h"
#include "dske/error.hpp"
#include "dske/pskm.hpp"
#include "dske/rng.hpp"

using namespace dske;

namespace {

PskTable fresh_table(std::size_t n, std::uint64_t table_id = 1) {
  Rng rng(42 + table_id);
  return PskTable(PartyId::from_name("hub1"), PartyId::from_name("alice"), table_id,
                  rng.bytes(n));
}

std::filesystem::path temp_file(const std::string& name) {
  auto dir = std::filesystem::temp_directory_path() / "dske_psk_test";
  std::filesystem::create_directories(dir);
  return dir / name;
}

}  // namespace

TEST_CASE("allocation walks the table front to back") {
  PskTable t = fresh_table(100);
  KeySlice a = t.allocate(10);
  CHECK(a.start == 0);
  CHECK(a.length() == 10);
  KeySlice b = t.allocate(10);
  CHECK(b.start == 10);
  CHECK(t.used_bytes() == 20);
  CHECK(t.unused_bytes() == 80);
}

TEST_CASE("allocation beyond capacity reports exhaustion") {
  PskTable t = fresh_table(100);
  CHECK_THROWS_WITH_AS(t.allocate(101), doctest::Contains("no free range"), DskeError);
  // Nothing was consumed by the failed attempt.
  CHECK(t.used_bytes() == 0);
}

TEST_CASE("claims are single-use") {
  PskTable t = fresh_table(100);
  t.claim_range(0, 10);
  CHECK_THROWS_WITH_AS(t.claim_range(0, 10), doctest::Contains("overlaps"), DskeError);
  CHECK_THROWS_AS(t.claim_range(5, 10), DskeError);
}

TEST_CASE("claims outside the table are rejected") {
  PskTable t = fresh_table(100);
  CHECK_THROWS_WITH_AS(t.claim_range(95, 15), doctest::Contains("outside"), DskeError);
}

TEST_CASE("claims and allocations interleave over disjoint ranges") {
  PskTable t = fresh_table(100);
  KeySlice a = t.allocate(10);
  CHECK(a.start == 0);
  KeySlice c = t.claim_range(10, 5);
  CHECK(c.bytes.size() == 5);
  // allocate skips the claimed range
  KeySlice b = t.allocate(20);
  CHECK(b.start == 15);
  CHECK(t.used_bytes() == 35);
}

TEST_CASE("claimed bytes really come from the stated range") {
  Rng rng(7);
  Bytes data = rng.bytes(64);
  PskTable t(PartyId::from_name("h"), PartyId::from_name("c"), 9, data);
  KeySlice s = t.claim_range(10, 5);
  CHECK(s.bytes == Bytes(data.begin() + 10, data.begin() + 15));
  CHECK(s.table_id == 9);
}

TEST_CASE("randomized interleaving never hands out a byte twice") {
  PskTable t = fresh_table(4096);
  std::mutex seen_mutex;
  std::vector<std::pair<std::uint64_t, std::uint64_t>> taken;

  auto worker = [&](unsigned seed) {
    std::mt19937_64 rng(seed);
    for (int i = 0; i < 200; ++i) {
      std::size_t len = 1 + rng() % 8;
      try {
        KeySlice s;
        if (rng() % 2 == 0) {
          s = t.allocate(len);
        } else {
          s = t.claim_range(rng() % 4096, len);
        }
        std::lock_guard lock(seen_mutex);
        taken.emplace_back(s.start, s.length());
      } catch (const DskeError&) {
        // overlap, bounds or exhaustion: fine, just must never double-issue
      }
    }
  };
  std::vector<std::thread> threads;
  for (unsigned i = 0; i < 8; ++i) threads.emplace_back(worker, 1000 + i);
  for (auto& th : threads) th.join();

  std::set<std::uint64_t> indices;
  std::size_t total = 0;
  for (auto [start, len] : taken) {
    total += len;
    for (std::uint64_t i = start; i < start + len; ++i) {
      REQUIRE(indices.insert(i).second);
    }
  }
  CHECK(t.used_bytes() == total);
  CHECK(t.used_bytes() + t.unused_bytes() == 4096);
}

TEST_CASE("container round trip") {
  PskTable t = fresh_table(256, 77);
  Bytes blob = serialize_pskm(t);
  PskTable back = parse_pskm(ByteView(blob));
  CHECK(back.table_id() == 77);
  CHECK(back.hub_id() == t.hub_id());
  CHECK(back.client_id() == t.client_id());
  CHECK(back.fully_unused());
  CHECK(Bytes(back.contents().begin(), back.contents().end()) ==
        Bytes(t.contents().begin(), t.contents().end()));
}

TEST_CASE("container rejects corrupted magic and truncation") {
  PskTable t = fresh_table(64);
  Bytes blob = serialize_pskm(t);

  Bytes bad_magic = blob;
  bad_magic[0] ^= 0xFF;
  CHECK_THROWS_WITH_AS(parse_pskm(ByteView(bad_magic)), "BadMagic", DskeError);

  Bytes truncated(blob.begin(), blob.end() - 5);
  CHECK_THROWS_WITH_AS(parse_pskm(ByteView(truncated)), "TruncatedFile", DskeError);

  Bytes bad_version = blob;
  bad_version[4] = 9;
  CHECK_THROWS_AS(parse_pskm(ByteView(bad_version)), DskeError);
}

TEST_CASE("container checks expected identities") {
  PskTable t = fresh_table(64);
  Bytes blob = serialize_pskm(t);
  CHECK_THROWS_WITH_AS(parse_pskm(ByteView(blob), PartyId::from_name("other")), "IdMismatch",
                       DskeError);
  CHECK_THROWS_WITH_AS(
      parse_pskm(ByteView(blob), PartyId::from_name("hub1"), PartyId::from_name("bob")),
      "IdMismatch", DskeError);
  CHECK_NOTHROW(
      parse_pskm(ByteView(blob), PartyId::from_name("hub1"), PartyId::from_name("alice")));
}

TEST_CASE("a consumed table cannot be re-serialized") {
  PskTable t = fresh_table(64);
  t.allocate(1);
  CHECK_THROWS_AS(serialize_pskm(t), DskeError);
}

TEST_CASE("file round trip") {
  auto path = temp_file("roundtrip.pskm");
  PskTable t = fresh_table(128, 5);
  write_pskm(t, path.string());
  PskTable back = read_pskm(path.string());
  CHECK(back.size() == 128);
  CHECK(back.table_id() == 5);
  std::filesystem::remove(path);
}

TEST_CASE("journal replay restores the consumption state") {
  auto path = temp_file("journal.bin");
  std::filesystem::remove(path);

  Rng rng(99);
  Bytes data = rng.bytes(256);
  {
    PskTable t(PartyId::from_name("h"), PartyId::from_name("c"), 3, data);
    t.attach_journal(path.string());
    t.allocate(16);
    t.claim_range(100, 8);
    CHECK(t.used_bytes() == 24);
  }
  {
    PskTable t(PartyId::from_name("h"), PartyId::from_name("c"), 3, data);
    t.attach_journal(path.string());
    CHECK(t.used_bytes() == 24);
    CHECK_THROWS_AS(t.claim_range(0, 16), DskeError);
    CHECK_THROWS_AS(t.claim_range(100, 1), DskeError);
    KeySlice next = t.allocate(16);
    CHECK(next.start == 16);
  }
  // A torn trailing record is ignored.
  {
    std::ofstream out(path, std::ios::binary | std::ios::app);
    const char torn[7] = {0, 0, 0, 0, 0, 0, 0};
    out.write(torn, sizeof(torn));
  }
  {
    PskTable t(PartyId::from_name("h"), PartyId::from_name("c"), 3, data);
    t.attach_journal(path.string());
    CHECK(t.used_bytes() == 40);
  }
  std::filesystem::remove(path);
}
