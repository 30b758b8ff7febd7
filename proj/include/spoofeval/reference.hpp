// Copyright 2026  The spoofeval authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//  http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#ifndef SPOOFEVAL_REFERENCE_HPP_
#define SPOOFEVAL_REFERENCE_HPP_

#include "spoofeval/features.hpp"
#include "spoofeval/gmm.hpp"

// Serial reference implementations of the parallel kernels.  These run the
// exact same blocked computations on the calling thread, so their results
// are bitwise identical to the parallel versions regardless of the thread
// count — the equality is asserted by the kernel tests and the two paths
// are compared by the benchmark target.

namespace spoofeval::reference {

FeatureMatrix lfcc(const AudioSignal& signal, const LfccConfig& cfg);
FeatureMatrix cqcc(const AudioSignal& signal, const CqccConfig& cfg);
double loglik(const GmmModel& model, const FeatureMatrix& frames);
GmmModel em_train(const FeatureMatrix& frames, const TrainConfig& cfg);

}  // namespace spoofeval::reference

#endif  // SPOOFEVAL_REFERENCE_HPP_
