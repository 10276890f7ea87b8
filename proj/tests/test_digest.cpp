// Copyright 2026 The govchain Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include <catch2/catch_amalgamated.hpp>
#include <openssl/evp.h>

#include "govchain/digest.hpp"
#include "govchain/sha256.hpp"
#include "test_util.hpp"

using namespace govchain;

namespace {

// Independent reference digest via OpenSSL's EVP interface.
std::array<std::uint8_t, 32> openssl_sha256(const Bytes& data) {
  std::array<std::uint8_t, 32> out{};
  unsigned int len = 0;
  EVP_MD_CTX* ctx = EVP_MD_CTX_new();
  REQUIRE(ctx != nullptr);
  REQUIRE(EVP_DigestInit_ex(ctx, EVP_sha256(), nullptr) == 1);
  REQUIRE(EVP_DigestUpdate(ctx, data.data(), data.size()) == 1);
  REQUIRE(EVP_DigestFinal_ex(ctx, out.data(), &len) == 1);
  EVP_MD_CTX_free(ctx);
  REQUIRE(len == 32);
  return out;
}

}  // namespace

TEST_CASE("known single-block digests") {
  // FIPS 180-4 test vectors.
  CHECK(fingerprint("").hex() ==
        "e3b0c44298fc1c149afbf4c8996fb92427ae41e4649b934ca495991b7852b855");
  CHECK(fingerprint("abc").hex() ==
        "ba7816bf8f01cfea414140de5dae2223b00361a396177a9cb410ff61f20015ad");
  CHECK(fingerprint("abcdbcdecdefdefgefghfghighijhijkijkljklmklmnlmnomnopnopq").hex() ==
        "248d6a61d20638b8e5c026930c3e6039a33ce45964ff2167f6ecedd419db06c1");
}

TEST_CASE("million-a vector, streamed in uneven pieces") {
  Sha256 hasher;
  std::string chunk(997, 'a');  // prime-sized chunks cross block boundaries
  std::size_t fed = 0;
  while (fed + chunk.size() <= 1000000) {
    hasher.update(chunk.data(), chunk.size());
    fed += chunk.size();
  }
  std::string rest(1000000 - fed, 'a');
  hasher.update(rest.data(), rest.size());
  Digest d;
  d.bytes = hasher.finish();
  CHECK(d.hex() ==
        "cdc76e5c9914fb9281a1c7e284d73e67f1809a48a497200e046d39ccc7112cd0");
}

TEST_CASE("agrees with OpenSSL on random inputs of every small length") {
  auto rng = testutil::make_rng(0x5eed0001);
  for (std::size_t len = 0; len <= 256; ++len) {
    Bytes data = testutil::random_bytes(rng, len);
    CHECK(fingerprint(data).bytes == openssl_sha256(data));
  }
  // And a spread of larger sizes around block boundaries.
  for (int i = 0; i < 200; ++i) {
    std::size_t len = rng() % 4097;
    Bytes data = testutil::random_bytes(rng, len);
    REQUIRE(fingerprint(data).bytes == openssl_sha256(data));
  }
}

TEST_CASE("streaming equals one-shot regardless of split points") {
  auto rng = testutil::make_rng(0x5eed0002);
  for (int i = 0; i < 50; ++i) {
    Bytes data = testutil::random_bytes(rng, 1 + rng() % 2048);
    Sha256 hasher;
    std::size_t pos = 0;
    while (pos < data.size()) {
      std::size_t step = 1 + rng() % 97;
      step = std::min(step, data.size() - pos);
      hasher.update(data.data() + pos, step);
      pos += step;
    }
    Digest streamed;
    streamed.bytes = hasher.finish();
    REQUIRE(streamed == fingerprint(data));
  }
}

TEST_CASE("hex encoding round-trips and is lowercase without prefix") {
  auto rng = testutil::make_rng(0x5eed0003);
  Bytes data = testutil::random_bytes(rng, 32);
  std::string hex = hex_encode(data);
  CHECK(hex.size() == 64);
  CHECK(hex.find_first_not_of("0123456789abcdef") == std::string::npos);
  CHECK(hex_decode(hex) == data);
}

TEST_CASE("digest parsing accepts 0x prefix and uppercase") {
  const std::string canonical =
      "ba7816bf8f01cfea414140de5dae2223b00361a396177a9cb410ff61f20015ad";
  Digest plain = Digest::from_hex(canonical);
  CHECK(Digest::from_hex("0x" + canonical) == plain);
  std::string upper = canonical;
  for (char& c : upper) c = static_cast<char>(std::toupper(c));
  CHECK(Digest::from_hex(upper) == plain);
  CHECK(Digest::from_hex("0X" + upper) == plain);
  CHECK(plain.hex() == canonical);  // rendering is always bare lowercase
}

TEST_CASE("digest parsing rejects bad input") {
  CHECK_THROWS_AS(Digest::from_hex("abc"), ValidationError);
  CHECK_THROWS_AS(Digest::from_hex(std::string(63, 'a')), ValidationError);
  CHECK_THROWS_AS(Digest::from_hex(std::string(65, 'a')), ValidationError);
  std::string bad(64, 'a');
  bad[10] = 'z';
  CHECK_THROWS_AS(Digest::from_hex(bad), ValidationError);
  CHECK_THROWS_AS(hex_decode("0g"), ValidationError);
  CHECK_THROWS_AS(hex_decode("a"), ValidationError);  // odd length
}

TEST_CASE("zero digest detection") {
  Digest zero;
  CHECK(zero.is_zero());
  Digest nonzero = fingerprint("x");
  CHECK_FALSE(nonzero.is_zero());
}
