// Copyright 2026 The Usersim Authors.
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


#ifndef USERSIM_TOOLS_HTTP_SERVER_H_
#define USERSIM_TOOLS_HTTP_SERVER_H_

#include <string>

#include "session_service.h"

namespace httplib {
class Server;
}

namespace usersim::app {

// POST /api/session, POST /api/session/{id}/turn, POST /api/session/{id}/judge
// and GET /api/report. When static_dir is set its files are served from /.
void RegisterRoutes(httplib::Server& server, SessionService& service,
                    const std::string& static_dir = "");

}  // namespace usersim::app

#endif  // USERSIM_TOOLS_HTTP_SERVER_H_
