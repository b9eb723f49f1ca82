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

#pragma once

#include <optional>
#include <vector>

#include "ladon/types.hpp"

namespace ladon {

// Pluggable signature backend. The simulated scheme below is deterministic and
// unforgeable inside the simulator since secrets never leave this object.
class SignatureScheme {
 public:
  virtual ~SignatureScheme() = default;
  virtual Signature sign(ReplicaId signer, const Fingerprint& fp) const = 0;
  virtual bool verify(ReplicaId signer, const Fingerprint& fp,
                      Signature sig) const = 0;
  // Combines individually valid signatures into one token.
  virtual uint64_t combine(const std::vector<SignedPart>& parts,
                           const std::vector<Signature>& sigs) const = 0;
};

class SimulatedSignatures final : public SignatureScheme {
 public:
  SimulatedSignatures(uint64_t seed, int num_replicas);

  Signature sign(ReplicaId signer, const Fingerprint& fp) const override;
  bool verify(ReplicaId signer, const Fingerprint& fp,
              Signature sig) const override;
  uint64_t combine(const std::vector<SignedPart>& parts,
                   const std::vector<Signature>& sigs) const override;

 private:
  std::vector<uint64_t> secrets_;
};

struct SignatureShare {
  ReplicaId signer = 0;
  Fingerprint fingerprint;
  Signature sig = 0;
};

// Refuses (nullopt) on an empty set, an invalid token or a repeated signer.
std::optional<Certificate> aggregate(const SignatureScheme& scheme,
                                     std::vector<SignatureShare> shares);

// True iff cert attests exactly the expected (signer, fingerprint) pairs.
bool verify_agg(const SignatureScheme& scheme, const Certificate& cert,
                std::vector<SignedPart> expected);

// Self-consistency check of a certificate: the token matches its own parts.
bool verify_agg(const SignatureScheme& scheme, const Certificate& cert);

// A quorum certificate: at least `quorum` distinct signers over one message.
bool verify_qc(const SignatureScheme& scheme, const Certificate& cert,
               std::size_t quorum);

}  // namespace ladon
