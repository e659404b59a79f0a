// Copyright 2026 The qpriv Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#ifndef QPRIV_QPRIV_HPP
#define QPRIV_QPRIV_HPP

#include "qpriv/divergences.hpp"
#include "qpriv/errors.hpp"
#include "qpriv/linalg.hpp"
#include "qpriv/privacy.hpp"
#include "qpriv/quantum.hpp"

#endif  // QPRIV_QPRIV_HPP
