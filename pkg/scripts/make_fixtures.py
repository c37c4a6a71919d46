#!/usr/bin/env python3
"""Write the hand-annotated fixture corpus used by the acceptance suite.

Each entry is (filename, content, expected) where expected lists the
diagnostics the file must produce: (rule, line) or (rule, line, fixable).
The manifest is the ground truth the detector is scored against; the
expectations were worked out by hand from the rule semantics.
"""

import json
import os
import sys

FIXTURES = []


def f(name, content, *expected):
    FIXTURES.append((name, content, list(expected)))


# -- rule 1: pipUseNoCacheDir -------------------------------------------------

f(
    "pip_basic.Dockerfile",
    """FROM python:3.11-slim
RUN pip install flask gunicorn
COPY app /app
CMD ["python", "/app/main.py"]
""",
    ("pipUseNoCacheDir", 2),
)

f(
    "pip_pip3_wrapped.Dockerfile",
    """FROM ubuntu:22.04
RUN sudo pip3 install requests
RUN python3 -m venv /venv && /venv/bin/pip install --upgrade setuptools
""",
    ("pipUseNoCacheDir", 2),
    ("pipUseNoCacheDir", 3),
)

f(
    "pip_clean.Dockerfile",
    """FROM python:3.12
RUN pip install --no-cache-dir flask
RUN pip3 install --no-cache-dir -r requirements.txt
""",
)

f(
    "pip_no_install.Dockerfile",
    """FROM python:3.12
RUN pip --version
RUN $PIP install somepackage
""",
)

# -- rule 2: npmCacheCleanUseForce ---------------------------------------------

f(
    "npm_force_missing.Dockerfile",
    """FROM node:18
RUN npm cache clean
""",
    ("npmCacheCleanUseForce", 2),
)

f(
    "npm_force_after_install.Dockerfile",
    """FROM node:18
RUN npm install && npm cache clean
""",
    ("npmCacheCleanUseForce", 2),
)

f(
    "npm_force_ok.Dockerfile",
    """FROM node:18
RUN npm install --production && npm cache clean --force
""",
)

f(
    "npm_force_short_flag.Dockerfile",
    """FROM node:20
RUN npm cache clean -f
""",
)

# -- rule 3: mkdirUsrSrcThenRemove ----------------------------------------------

f(
    "mkdir_usrsrc_build.Dockerfile",
    """FROM buildpack-deps:bookworm
RUN mkdir -p /usr/src/node && cd /usr/src/node && ./configure && make -j4 && make install
""",
    ("mkdirUsrSrcThenRemove", 2),
)

f(
    "mkdir_usrsrc_two_paths.Dockerfile",
    """FROM debian:bookworm
RUN mkdir -p /usr/src/app /usr/src/lib && make -C /usr/src/app
""",
    ("mkdirUsrSrcThenRemove", 2),
    ("mkdirUsrSrcThenRemove", 2),
)

f(
    "mkdir_usrsrc_removed.Dockerfile",
    """FROM debian:bookworm
RUN mkdir -p /usr/src/redis && make -C /usr/src/redis install && rm -rf /usr/src/redis
""",
)

f(
    "mkdir_elsewhere.Dockerfile",
    """FROM debian:bookworm
RUN mkdir -p /opt/app && touch /opt/app/ready
RUN mkdir $SRC_DIR && make -C $SRC_DIR
""",
)

# -- rule 4: rmRecursiveAfterMktempD ---------------------------------------------

f(
    "mktemp_kept.Dockerfile",
    """FROM debian:bullseye
RUN BUILD_DIR=$(mktemp -d) && git clone https://example.com/app.git $BUILD_DIR && make -C $BUILD_DIR install
""",
    ("rmRecursiveAfterMktempD", 2),
)

f(
    "mktemp_backticks.Dockerfile",
    """FROM ubuntu:20.04
RUN SCRATCH=`mktemp -d` && curl -o $SCRATCH/pkg.tgz https://example.com/pkg.tgz && cp $SCRATCH/pkg.tgz /opt/
""",
    ("rmRecursiveAfterMktempD", 2),
)

f(
    "mktemp_cleaned.Dockerfile",
    """FROM debian:bullseye
RUN T=$(mktemp -d) && cd $T && make && rm -rf "$T"
""",
)

f(
    "mktemp_uncaptured.Dockerfile",
    """FROM debian:bullseye
RUN mktemp -d
RUN cp config.ini $(mktemp -d)/config.ini
""",
)

# -- rule 5: tarSomethingRmTheSomething -------------------------------------------

# the gsl build snippet: the archive is never removed, and the fix must land
# before the `cd gsl-1.16`
f(
    "tar_gsl.Dockerfile",
    """FROM debian:stretch
RUN wget -O gsl.tgz ftp://ftp.gnu.org/gsl-1.16.tar \\
  && tar -zxf gsl.tgz && mkdir gsl \\
  && cd gsl-1.16 && ./configure --prefix=/app/gsl \\
  && make && make install
""",
    ("tarSomethingRmTheSomething", 3),
)

f(
    "tar_kept.Dockerfile",
    """FROM debian:bullseye
RUN curl -o /tmp/pkg.tgz https://example.com/pkg.tgz && tar -xzf /tmp/pkg.tgz -C /srv && /srv/setup.sh
""",
    ("tarSomethingRmTheSomething", 2),
)

# the firefox snippet: `rm -rf /tmp/firefox.*` must count as removing
# /tmp/firefox.tar.bz2 (glob-aware matching), so no tar smell here
f(
    "tar_firefox.Dockerfile",
    """FROM ubuntu:20.04
RUN FIREFOX_URL="https://download.mozilla.org/?product=firefox-latest-ssl&os=linux64&lang=en-US" \\
  && ACTUAL_URL=$(curl -Ls -o /dev/null -w "%{url_effective}" $FIREFOX_URL) \\
  && curl --silent --show-error --location --fail --retry 3 --output /tmp/firefox.tar.bz2 $ACTUAL_URL \\
  && sudo tar -xvjf /tmp/firefox.tar.bz2 -C /opt \\
  && sudo ln -s /opt/firefox/firefox /usr/local/bin/firefox \\
  && sudo apt-get install -y libgtk3.0-cil-dev libasound2 libasound2 libdbus-glib-1-2 libdbus-1-3 \\
  && rm -rf /tmp/firefox.* \\
  && firefox --version
""",
    ("aptGetInstallUseNoRec", 7),
    ("aptGetInstallThenRemoveAptLists", 7),
)

f(
    "tar_removed.Dockerfile",
    """FROM debian:bullseye
RUN curl -fsSL -o node.tar.xz https://nodejs.org/dist/node.tar.xz && tar -xJf node.tar.xz -C /usr/local --strip-components=1 && rm node.tar.xz
""",
)

f(
    "tar_create_and_stdin.Dockerfile",
    """FROM debian:bullseye
RUN tar -czf /backup.tgz /etc && ls -la /backup.tgz
RUN curl -L https://example.com/tool.tgz | tar -xz -C /opt
""",
)

f(
    "tar_variable_archive.Dockerfile",
    """FROM debian:bullseye
RUN tar -xzf $PKG_ARCHIVE -C /opt && echo done
""",
)

# -- rule 6: apkAddUseNoCache -----------------------------------------------------

f(
    "apk_plain.Dockerfile",
    """FROM alpine:3.18
RUN apk add curl git
""",
    ("apkAddUseNoCache", 2),
)

f(
    "apk_update_cache.Dockerfile",
    """FROM alpine:3.19
RUN apk add --update-cache nginx
""",
    ("apkAddUseNoCache", 2),
)

f(
    "apk_no_cache.Dockerfile",
    """FROM alpine:3.18
RUN apk add --no-cache curl
""",
)

f(
    "apk_no_add.Dockerfile",
    """FROM alpine:3.18
RUN apk update && apk upgrade
""",
)

# -- rules 7/8: apt-get install ------------------------------------------------------

f(
    "apt_both_missing.Dockerfile",
    """FROM debian:bookworm
RUN apt-get update && apt-get install -y build-essential
""",
    ("aptGetInstallUseNoRec", 2),
    ("aptGetInstallThenRemoveAptLists", 2),
)

f(
    "apt_norec_missing.Dockerfile",
    """FROM debian:bookworm
RUN apt-get update && apt-get install -y git && rm -rf /var/lib/apt/lists/*
""",
    ("aptGetInstallUseNoRec", 2),
)

f(
    "apt_lists_missing.Dockerfile",
    """FROM debian:bookworm
RUN apt-get update && apt-get install -y --no-install-recommends vim-tiny
""",
    ("aptGetInstallThenRemoveAptLists", 2),
)

f(
    "apt_clean.Dockerfile",
    """FROM debian:bookworm
RUN apt-get update && apt-get install -y --no-install-recommends curl && rm -rf /var/lib/apt/lists/*
""",
)

f(
    "apt_variant.Dockerfile",
    """FROM ubuntu:24.04
RUN apt update && apt install -y jq
""",
    ("aptGetInstallUseNoRec", 2),
    ("aptGetInstallThenRemoveAptLists", 2),
)

# cleanup in a later RUN is a different layer: it does not remove the smell
f(
    "apt_cross_run.Dockerfile",
    """FROM debian:bookworm
RUN apt-get update && apt-get install -y --no-install-recommends wget
RUN rm -rf /var/lib/apt/lists/*
""",
    ("aptGetInstallThenRemoveAptLists", 2),
)

f(
    "apt_glob_covers.Dockerfile",
    """FROM debian:bookworm
RUN apt-get update && apt-get install -y --no-install-recommends one && rm -rf /var/lib/apt/lists
RUN apt-get update && apt-get install -y --no-install-recommends two && rm -rf /var/lib/apt/*
""",
)

f(
    "apt_sudo_wrapped.Dockerfile",
    """FROM ubuntu:22.04
RUN sudo apt-get update && sudo apt-get install -y vim-tiny && sudo rm -rf /var/lib/apt/lists/*
""",
    ("aptGetInstallUseNoRec", 2),
)

# -- rule 9: gpgVerifyAscRmAsc ---------------------------------------------------------

f(
    "gpg_asc_kept.Dockerfile",
    """FROM debian:bullseye
RUN wget -O node.tar.xz https://nodejs.org/dist/node.tar.xz \\
  && wget -O node.tar.xz.asc https://nodejs.org/dist/node.tar.xz.asc \\
  && gpg --batch --verify node.tar.xz.asc \\
  && tar -xJf node.tar.xz -C /usr/local && rm node.tar.xz
""",
    ("gpgVerifyAscRmAsc", 4),
)

f(
    "gpg_asc_kept2.Dockerfile",
    """FROM alpine:3.18
RUN gpg --verify /tmp/app.tar.gz.asc /tmp/app.tar.gz && tar -xzf /tmp/app.tar.gz -C /opt && rm /tmp/app.tar.gz
""",
    ("gpgVerifyAscRmAsc", 2),
)

f(
    "gpg_asc_removed.Dockerfile",
    """FROM debian:bullseye
RUN gpg --batch --verify app.tar.asc && tar -xf app.tar && rm app.tar.asc && rm app.tar
""",
)

f(
    "gpg_no_verify.Dockerfile",
    """FROM debian:bullseye
RUN gpg --import /keys/release.key && echo imported
RUN gpg --verify signature.sig artifact.bin
""",
)

# -- rule 10: npmCacheCleanAfterInstall ---------------------------------------------------

f(
    "npm_install_no_clean.Dockerfile",
    """FROM node:18
RUN npm install --production
""",
    ("npmCacheCleanAfterInstall", 2),
)

f(
    "npm_i_alias.Dockerfile",
    """FROM node:20
RUN npm i && npm run build
""",
    ("npmCacheCleanAfterInstall", 2),
)

f(
    "npm_install_cleaned.Dockerfile",
    """FROM node:18
RUN npm install && npm run build && npm cache clean --force
""",
)

f(
    "npm_ci.Dockerfile",
    """FROM node:18
RUN npm ci --omit dev
""",
)

# -- rules 11/12: gem update --system ------------------------------------------------------

f(
    "gem_update_bare.Dockerfile",
    """FROM ruby:3.2
RUN gem update --system
""",
    ("gemUpdateSystemRmRootGem", 2),
    ("gemUpdateNoDocument", 2),
)

f(
    "gem_gemrc_earlier_run.Dockerfile",
    """FROM ruby:3.2
RUN echo 'gem: --no-document' >> /etc/gemrc
RUN gem update --system
""",
    ("gemUpdateSystemRmRootGem", 3),
)

f(
    "gem_rm_only.Dockerfile",
    """FROM ruby:3.1
RUN gem update --system && rm -rf /root/.gem
""",
    ("gemUpdateNoDocument", 2),
)

f(
    "gem_clean.Dockerfile",
    """FROM ruby:3.2
RUN echo 'gem: --no-document' >> ~/.gemrc && gem update --system && rm -rf /root/.gem
""",
)

f(
    "gem_nodoc_flag.Dockerfile",
    """FROM ruby:3.2
RUN gem update --system --no-document && rm -rf /root/.gem
""",
)

f(
    "gem_install_only.Dockerfile",
    """FROM ruby:3.2
RUN gem install rails --no-document
""",
)

# -- rule 13: yumInstallRmVarCacheYum ---------------------------------------------------------

f(
    "yum_plain.Dockerfile",
    """FROM centos:7
RUN yum install -y httpd
""",
    ("yumInstallRmVarCacheYum", 2),
)

f(
    "yum_dnf.Dockerfile",
    """FROM fedora:39
RUN dnf install -y gcc make
""",
    ("yumInstallRmVarCacheYum", 2),
)

f(
    "yum_cleaned.Dockerfile",
    """FROM centos:7
RUN yum install -y nginx && yum clean all && rm -rf /var/cache/yum
""",
)

f(
    "yum_dnf_cleaned.Dockerfile",
    """FROM fedora:39
RUN dnf install -y git && rm -rf /var/cache/dnf
""",
)

# -- rule 14: yarnCacheCleanAfterInstall -----------------------------------------------------

f(
    "yarn_install.Dockerfile",
    """FROM node:18
RUN yarn install --frozen-lockfile
""",
    ("yarnCacheCleanAfterInstall", 2),
)

f(
    "yarn_bare.Dockerfile",
    """FROM node:20
RUN yarn --production
""",
    ("yarnCacheCleanAfterInstall", 2),
)

f(
    "yarn_cleaned.Dockerfile",
    """FROM node:18
RUN yarn install && yarn cache clean
""",
)

f(
    "yarn_run_only.Dockerfile",
    """FROM node:18
RUN yarn run build
""",
)

# -- repair-safety shapes (the documented not-fixable exclusions) -----------------------------

f(
    "notfixable_semicolon.Dockerfile",
    """FROM debian:bookworm
RUN apt-get update; apt-get install -y curl
""",
    ("aptGetInstallUseNoRec", 2),
    ("aptGetInstallThenRemoveAptLists", 2, False),
)

f(
    "notfixable_or_chain.Dockerfile",
    """FROM centos:7
RUN yum install -y tools || echo "install failed"
""",
    ("yumInstallRmVarCacheYum", 2, False),
)

f(
    "notfixable_compound.Dockerfile",
    """FROM debian:bookworm
RUN if [ ! -f /etc/ssl/done ]; then apt-get install -y openssl; fi
""",
    ("aptGetInstallUseNoRec", 2),
    ("aptGetInstallThenRemoveAptLists", 2, False),
)

f(
    "notfixable_exec_array.Dockerfile",
    """FROM node:18
RUN ["yarn", "install"]
""",
    ("yarnCacheCleanAfterInstall", 2, False),
)

# -- forms and robustness ----------------------------------------------------------------------

f(
    "exec_form_shell.Dockerfile",
    """FROM python:3.11
RUN ["sh", "-c", "pip install mypkg"]
""",
    ("pipUseNoCacheDir", 2),
)

f(
    "multi_stage.Dockerfile",
    """FROM node:18 AS build
WORKDIR /app
RUN npm install
FROM nginx:alpine
RUN apk add curl
COPY --from=build /app/dist /usr/share/nginx/html
""",
    ("npmCacheCleanAfterInstall", 3),
    ("apkAddUseNoCache", 5),
)

f(
    "heredoc_body.Dockerfile",
    """FROM debian:bookworm
RUN <<EOF
apt-get update
apt-get install -y cowsay
EOF
""",
    ("aptGetInstallUseNoRec", 4),
    ("aptGetInstallThenRemoveAptLists", 4, False),
)

f(
    "unterminated_conservative.Dockerfile",
    """FROM python:3.11
RUN pip install flask 'oops
""",
)

f(
    "variable_command.Dockerfile",
    """FROM debian:bookworm
RUN $INSTALLER install -y stuff
""",
)

f(
    "clean_formatting.Dockerfile",
    """# syntax=docker/dockerfile:1
FROM debian:bookworm

# install the toolchain
RUN apt-get update && \\
    # core packages only
    apt-get install -y --no-install-recommends ca-certificates gnupg && \\
    rm -rf /var/lib/apt/lists/*

ENV PATH=/opt/bin:$PATH
CMD ["bash"]
""",
)

f(
    "clean_exec_forms.Dockerfile",
    """FROM alpine:3.19
RUN apk add --no-cache tini
ENTRYPOINT ["/sbin/tini", "--"]
CMD ["sh", "-c", "echo ready"]
""",
)

f(
    "clean_workdir_expose.Dockerfile",
    """FROM golang:1.21 AS builder
WORKDIR /src
COPY . .
RUN go build -o /out/server ./cmd/server
FROM gcr.io/distroless/base
COPY --from=builder /out/server /server
EXPOSE 8080
USER nonroot
ENTRYPOINT ["/server"]
""",
)


def main(out_dir):
    os.makedirs(out_dir, exist_ok=True)
    manifest = {}
    for name, content, expected in FIXTURES:
        with open(os.path.join(out_dir, name), "w", encoding="utf-8") as fh:
            fh.write(content)
        manifest[name] = [
            {"rule": e[0], "line": e[1], "fixable": e[2] if len(e) > 2 else True}
            for e in expected
        ]
    with open(os.path.join(out_dir, "manifest.json"), "w", encoding="utf-8") as fh:
        json.dump(manifest, fh, indent=2, sort_keys=True)
        fh.write("\n")
    print(f"wrote {len(FIXTURES)} fixtures to {out_dir}")


if __name__ == "__main__":
    main(sys.argv[1] if len(sys.argv) > 1 else "tests/data/fixtures")
