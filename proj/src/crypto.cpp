// Copyright 2026 The Ladon Simulator Authors
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

#include "ladon/crypto.hpp"

#include <algorithm>

#include "ladon/hash.hpp"

namespace ladon {

SimulatedSignatures::SimulatedSignatures(uint64_t seed, int num_replicas) {
  Rng rng(hash_combine(seed, 0x5167u));
  secrets_.reserve(static_cast<std::size_t>(num_replicas));
  for (int i = 0; i < num_replicas; ++i) secrets_.push_back(rng.next());
}

Signature SimulatedSignatures::sign(ReplicaId signer,
                                    const Fingerprint& fp) const {
  if (signer < 0 || static_cast<std::size_t>(signer) >= secrets_.size()) {
    return 0;
  }
  return hash_combine(secrets_[static_cast<std::size_t>(signer)], fp.hash()) |
         1u;
}

bool SimulatedSignatures::verify(ReplicaId signer, const Fingerprint& fp,
                                 Signature sig) const {
  return sig != 0 && sign(signer, fp) == sig;
}

uint64_t SimulatedSignatures::combine(
    const std::vector<SignedPart>& parts,
    const std::vector<Signature>& sigs) const {
  uint64_t acc = mix64(parts.size());
  for (std::size_t i = 0; i < parts.size(); ++i) {
    acc = hash_combine(acc, static_cast<uint64_t>(parts[i].signer));
    acc = hash_combine(acc, sigs[i]);
  }
  return acc;
}

namespace {

bool by_signer(const SignedPart& a, const SignedPart& b) {
  return a.signer < b.signer;
}

uint64_t recompute(const SignatureScheme& scheme,
                   const std::vector<SignedPart>& parts) {
  std::vector<Signature> sigs;
  sigs.reserve(parts.size());
  for (const auto& p : parts) sigs.push_back(scheme.sign(p.signer, p.fingerprint));
  return scheme.combine(parts, sigs);
}

}  // namespace

std::optional<Certificate> aggregate(const SignatureScheme& scheme,
                                     std::vector<SignatureShare> shares) {
  if (shares.empty()) return std::nullopt;
  std::sort(shares.begin(), shares.end(),
            [](const SignatureShare& a, const SignatureShare& b) {
              return a.signer < b.signer;
            });
  Certificate cert;
  std::vector<Signature> sigs;
  for (std::size_t i = 0; i < shares.size(); ++i) {
    const auto& s = shares[i];
    if (i > 0 && shares[i - 1].signer == s.signer) return std::nullopt;
    if (!scheme.verify(s.signer, s.fingerprint, s.sig)) return std::nullopt;
    cert.parts.push_back(SignedPart{s.signer, s.fingerprint});
    sigs.push_back(s.sig);
  }
  cert.aggregate = scheme.combine(cert.parts, sigs);
  return cert;
}

bool verify_agg(const SignatureScheme& scheme, const Certificate& cert,
                std::vector<SignedPart> expected) {
  std::sort(expected.begin(), expected.end(), by_signer);
  if (expected != cert.parts) return false;
  return verify_agg(scheme, cert);
}

bool verify_agg(const SignatureScheme& scheme, const Certificate& cert) {
  if (cert.parts.empty()) return false;
  for (std::size_t i = 1; i < cert.parts.size(); ++i) {
    if (cert.parts[i - 1].signer >= cert.parts[i].signer) return false;
  }
  return recompute(scheme, cert.parts) == cert.aggregate;
}

bool verify_qc(const SignatureScheme& scheme, const Certificate& cert,
               std::size_t quorum) {
  if (cert.parts.size() < quorum || cert.parts.empty()) return false;
  const auto& fp = cert.parts.front().fingerprint;
  for (const auto& p : cert.parts) {
    if (!(p.fingerprint == fp)) return false;
  }
  return verify_agg(scheme, cert);
}

}  // namespace ladon
