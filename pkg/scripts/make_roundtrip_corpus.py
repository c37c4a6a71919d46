#!/usr/bin/env python3
"""Write the round-trip corpus: realistic Dockerfiles in many styles.

The files mirror patterns from well-known public images and project
templates (package-manager heavy builds, multi-stage compiles, verify-
then-extract downloads, metadata-rich service images) plus mechanical
variants that show up in the wild: CRLF line endings, tab indentation,
license headers, and extra blank lines. They exist to pin the byte-exact
reprint guarantee, not to be buildable.
"""

import os
import sys

BASE: dict[str, str] = {}


def d(name: str, content: str) -> None:
    BASE[name] = content


d("node-app", """FROM node:18-alpine AS deps
WORKDIR /app
COPY package.json package-lock.json ./
RUN npm ci --omit=dev

FROM node:18-alpine AS runner
WORKDIR /app
ENV NODE_ENV=production
COPY --from=deps /app/node_modules ./node_modules
COPY . .
EXPOSE 3000
CMD ["node", "server.js"]
""")

d("python-flask", """FROM python:3.11-slim
WORKDIR /srv
COPY requirements.txt .
RUN pip install --no-cache-dir -r requirements.txt
COPY . .
EXPOSE 5000
ENV FLASK_APP=app.py
CMD ["flask", "run", "--host=0.0.0.0"]
""")

d("golang-multistage", """FROM golang:1.21-alpine AS builder
RUN apk add --no-cache git ca-certificates
WORKDIR /src
COPY go.mod go.sum ./
RUN go mod download
COPY . .
RUN CGO_ENABLED=0 go build -ldflags='-s -w' -o /bin/app ./cmd/app

FROM scratch
COPY --from=builder /etc/ssl/certs/ca-certificates.crt /etc/ssl/certs/
COPY --from=builder /bin/app /app
ENTRYPOINT ["/app"]
""")

d("nginx-static", """FROM nginx:1.25-alpine
COPY dist/ /usr/share/nginx/html/
COPY nginx.conf /etc/nginx/conf.d/default.conf
EXPOSE 80
HEALTHCHECK --interval=30s --timeout=3s CMD wget -q --spider http://localhost/ || exit 1
""")

d("redis-style", """FROM debian:bullseye-slim

# add our user and group first to make sure their IDs get assigned consistently
RUN groupadd -r -g 999 redis && useradd -r -g redis -u 999 redis

ENV GOSU_VERSION 1.16
RUN set -eux; \\
\tsavedAptMark="$(apt-mark showmanual)"; \\
\tapt-get update; \\
\tapt-get install -y --no-install-recommends ca-certificates wget; \\
\trm -rf /var/lib/apt/lists/*; \\
\twget -O /usr/local/bin/gosu "https://github.com/tianon/gosu/releases/download/$GOSU_VERSION/gosu-amd64"; \\
\tchmod +x /usr/local/bin/gosu; \\
\tgosu --version; \\
\tgosu nobody true

VOLUME /data
WORKDIR /data
EXPOSE 6379
CMD ["redis-server"]
""")

d("postgres-style", """FROM debian:bookworm-slim

RUN set -ex; \\
	if ! command -v gpg > /dev/null; then \\
		apt-get update; \\
		apt-get install -y --no-install-recommends gnupg dirmngr; \\
		rm -rf /var/lib/apt/lists/*; \\
	fi

ENV PG_MAJOR 16
ENV PATH $PATH:/usr/lib/postgresql/$PG_MAJOR/bin

RUN mkdir /docker-entrypoint-initdb.d

STOPSIGNAL SIGINT
EXPOSE 5432
CMD ["postgres"]
""")

d("ruby-rails", """FROM ruby:3.2
RUN apt-get update -qq && apt-get install -y --no-install-recommends nodejs postgresql-client && rm -rf /var/lib/apt/lists/*
WORKDIR /myapp
COPY Gemfile /myapp/Gemfile
COPY Gemfile.lock /myapp/Gemfile.lock
RUN bundle install
COPY . /myapp
EXPOSE 3000
CMD ["rails", "server", "-b", "0.0.0.0"]
""")

d("java-maven", """FROM maven:3.9-eclipse-temurin-17 AS build
WORKDIR /build
COPY pom.xml .
RUN mvn -B dependency:go-offline
COPY src ./src
RUN mvn -B -DskipTests package

FROM eclipse-temurin:17-jre
COPY --from=build /build/target/app.jar /opt/app.jar
EXPOSE 8080
ENTRYPOINT ["java", "-jar", "/opt/app.jar"]
""")

d("rust-multistage", """FROM rust:1.74 as builder
WORKDIR /usr/src/myapp
COPY . .
RUN cargo install --path .

FROM debian:bookworm-slim
RUN apt-get update && apt-get install -y --no-install-recommends libssl3 && rm -rf /var/lib/apt/lists/*
COPY --from=builder /usr/local/cargo/bin/myapp /usr/local/bin/myapp
CMD ["myapp"]
""")

d("alpine-tools", """FROM alpine:3.19
RUN apk add --no-cache \\
    bash \\
    curl \\
    jq \\
    openssl \\
    tzdata
ENTRYPOINT ["/bin/bash"]
""")

d("ubuntu-devtools", """FROM ubuntu:22.04
ARG DEBIAN_FRONTEND=noninteractive
RUN apt-get update && apt-get install -y --no-install-recommends \\
        build-essential \\
        cmake \\
        git \\
        ninja-build \\
        pkg-config \\
        python3-pip \\
    && rm -rf /var/lib/apt/lists/*
RUN pip3 install --no-cache-dir conan meson
USER 1000:1000
""")

d("centos-yum", """FROM centos:7
RUN yum install -y epel-release && \\
    yum install -y nginx supervisor && \\
    yum clean all && \\
    rm -rf /var/cache/yum
COPY supervisord.conf /etc/supervisord.conf
EXPOSE 80
CMD ["/usr/bin/supervisord", "-c", "/etc/supervisord.conf"]
""")

d("fedora-dnf", """FROM fedora:39
RUN dnf install -y python3-devel gcc && \\
    dnf clean all && rm -rf /var/cache/dnf
COPY . /code
WORKDIR /code
CMD ["python3", "main.py"]
""")

d("php-composer", """FROM composer:2 AS vendor
WORKDIR /app
COPY composer.json composer.lock ./
RUN composer install --no-dev --no-scripts --prefer-dist

FROM php:8.2-fpm-alpine
RUN apk add --no-cache icu-libs libzip
COPY --from=vendor /app/vendor /var/www/vendor
COPY . /var/www
WORKDIR /var/www
CMD ["php-fpm"]
""")

d("dotnet", """FROM mcr.microsoft.com/dotnet/sdk:8.0 AS build
WORKDIR /source
COPY *.csproj .
RUN dotnet restore
COPY . .
RUN dotnet publish -c Release -o /app --no-restore

FROM mcr.microsoft.com/dotnet/aspnet:8.0
WORKDIR /app
COPY --from=build /app .
ENTRYPOINT ["dotnet", "service.dll"]
""")

d("conda-notebook", """FROM continuumio/miniconda3
RUN conda install -y numpy pandas matplotlib && conda clean -afy
RUN pip install --no-cache-dir jupyterlab
EXPOSE 8888
CMD ["jupyter", "lab", "--ip=0.0.0.0", "--allow-root"]
""")

d("cuda-wheel", """FROM nvidia/cuda:12.2.0-runtime-ubuntu22.04
ENV PYTHONUNBUFFERED=1
RUN apt-get update && \\
    apt-get install -y --no-install-recommends python3 python3-pip && \\
    rm -rf /var/lib/apt/lists/*
RUN python3 -m pip install --no-cache-dir torch --index-url https://download.pytorch.org/whl/cu121
COPY train.py /workspace/train.py
WORKDIR /workspace
CMD ["python3", "train.py"]
""")

d("openjdk-heredoc", """FROM eclipse-temurin:21-jdk
RUN <<EOF
set -e
mkdir -p /opt/tools
echo "tools ready" > /opt/tools/marker
EOF
COPY build.gradle settings.gradle ./
CMD ["gradle", "run"]
""")

d("httpd-style", """FROM httpd:2.4
COPY ./public-html/ /usr/local/apache2/htdocs/
COPY httpd.conf /usr/local/apache2/conf/httpd.conf
EXPOSE 80
""")

d("memcached-style", """FROM alpine:3.18

RUN addgroup -g 11211 memcache && adduser -D -u 11211 -G memcache memcache

RUN apk add --no-cache libsasl

USER memcache
EXPOSE 11211
CMD ["memcached"]
""")

d("mongo-gpg", """FROM ubuntu:jammy

RUN set -eux; \\
    apt-get update; \\
    apt-get install -y --no-install-recommends ca-certificates gnupg wget; \\
    rm -rf /var/lib/apt/lists/*; \\
    wget -O server.asc "https://pgp.mongodb.com/server-7.0.asc"; \\
    gpg --batch --import server.asc; \\
    rm server.asc

EXPOSE 27017
CMD ["mongod"]
""")

d("mysql-style", """FROM oraclelinux:8-slim

RUN set -eux; \\
    microdnf install -y gzip openssl; \\
    microdnf clean all

VOLUME /var/lib/mysql
EXPOSE 3306 33060
CMD ["mysqld"]
""")

d("rabbitmq-style", """FROM ubuntu:22.04

RUN groupadd --gid 999 --system rabbitmq \\
    && useradd --uid 999 --system --home-dir /var/lib/rabbitmq --gid rabbitmq rabbitmq \\
    && mkdir -p /var/lib/rabbitmq /etc/rabbitmq /var/log/rabbitmq \\
    && chown -fR rabbitmq:rabbitmq /var/lib/rabbitmq /etc/rabbitmq /var/log/rabbitmq

EXPOSE 4369 5671 5672 15691 15692
CMD ["rabbitmq-server"]
""")

d("elasticsearch-ish", """FROM ubuntu:20.04
ENV ES_HOME=/usr/share/elasticsearch
RUN mkdir -p $ES_HOME && \\
    curl -fsSL https://artifacts.elastic.co/es.tar.gz -o /tmp/es.tar.gz && \\
    tar -xzf /tmp/es.tar.gz -C $ES_HOME --strip-components=1 && \\
    rm /tmp/es.tar.gz
WORKDIR /usr/share/elasticsearch
EXPOSE 9200 9300
CMD ["bin/elasticsearch"]
""")

d("grafana-ish", """FROM alpine:3.18
ARG GF_UID="472"
ARG GF_GID="0"
RUN apk add --no-cache ca-certificates bash tzdata musl-utils
COPY conf/defaults.ini /usr/share/grafana/conf/defaults.ini
EXPOSE 3000
USER "$GF_UID"
ENTRYPOINT [ "/run.sh" ]
""")

d("caddy-style", """FROM caddy:2-builder AS builder
RUN xcaddy build --with github.com/caddy-dns/cloudflare

FROM caddy:2
COPY --from=builder /usr/bin/caddy /usr/bin/caddy
EXPOSE 80 443
""")

d("traefik-scratch", """FROM scratch
COPY certs/ca-certificates.crt /etc/ssl/certs/
COPY traefik /
EXPOSE 80
VOLUME ["/tmp"]
ENTRYPOINT ["/traefik"]
""")

d("distroless-java", """FROM gcr.io/distroless/java17-debian12
COPY target/app.jar /app/app.jar
WORKDIR /app
CMD ["app.jar"]
""")

d("busybox-min", """FROM busybox:1.36
COPY entrypoint.sh /usr/local/bin/entrypoint.sh
RUN chmod +x /usr/local/bin/entrypoint.sh
ENTRYPOINT ["entrypoint.sh"]
""")

d("platform-arg", """FROM --platform=$BUILDPLATFORM golang:1.21 AS build
ARG TARGETOS
ARG TARGETARCH
WORKDIR /src
COPY . .
RUN GOOS=$TARGETOS GOARCH=$TARGETARCH go build -o /out/tool .

FROM alpine:3.19
COPY --from=build /out/tool /usr/local/bin/tool
ENTRYPOINT ["tool"]
""")

d("buildkit-mounts", """FROM python:3.12-slim
WORKDIR /app
COPY requirements.txt .
RUN --mount=type=cache,target=/root/.cache/pip pip install -r requirements.txt
COPY . .
CMD ["python", "-m", "app"]
""")

d("copy-heredoc", """FROM alpine:3.19
COPY <<EOF /etc/motd
Welcome to the build container.
Be tidy: clean caches in the same layer.
EOF
CMD ["cat", "/etc/motd"]
""")

d("escape-backtick", """# escape=`
FROM mcr.microsoft.com/windows/servercore:ltsc2022
SHELL ["cmd", "/S", "/C"]
RUN echo hello `
    world
CMD ["cmd"]
""")

d("exec-heavy", """FROM debian:bookworm-slim
RUN ["sh", "-c", "echo exec shell form"]
RUN ["/usr/bin/env", "true"]
SHELL ["/bin/bash", "-o", "pipefail", "-c"]
RUN echo piped | tee /tmp/out
ENTRYPOINT ["/bin/sh", "-c", "exec \\"$0\\" \\"$@\\"", "sh"]
CMD ["true"]
""")

d("onbuild-base", """FROM python:3.11
WORKDIR /usr/src/app
ONBUILD COPY requirements.txt /usr/src/app/
ONBUILD RUN pip install --no-cache-dir -r requirements.txt
ONBUILD COPY . /usr/src/app
CMD ["python"]
""")

d("metadata-rich", """FROM alpine:3.19
LABEL org.opencontainers.image.title="sample" \\
      org.opencontainers.image.description="A sample image with rich metadata" \\
      org.opencontainers.image.licenses=MIT
MAINTAINER devs@example.com
STOPSIGNAL SIGTERM
HEALTHCHECK --interval=5m --timeout=3s \\
  CMD curl -f http://localhost/ || exit 1
EXPOSE 8080/tcp 8443/tcp
VOLUME /var/log /var/db
CMD ["/bin/sh"]
""")

d("arg-from", """ARG BASE_IMAGE=alpine:3.19
ARG BASE_TAG=latest
FROM ${BASE_IMAGE}
ARG BUILD_DATE
ARG VCS_REF
LABEL build-date=$BUILD_DATE vcs-ref=$VCS_REF
RUN echo "built from ${BASE_IMAGE}"
""")

d("comment-heavy", """# This Dockerfile builds the acceptance-test image.
# It intentionally carries a lot of commentary.

# --- base layer -------------------------------------------------------
FROM debian:bookworm
# we need curl for the healthcheck below
RUN apt-get update \\
    # the lists are refreshed here
    && apt-get install -y --no-install-recommends curl \\
    # and removed here, same layer
    && rm -rf /var/lib/apt/lists/*
# --- config -----------------------------------------------------------
ENV LANG=C.UTF-8
# the end
CMD ["curl", "--version"]
""")

d("clamav-chain", """FROM debian:bookworm-slim
RUN set -eux; \\
    apt-get update; \\
    apt-get install -y --no-install-recommends \\
        clamav \\
        clamav-daemon \\
        clamav-freshclam \\
    ; \\
    rm -rf /var/lib/apt/lists/*; \\
    mkdir -p /var/run/clamav; \\
    chown clamav:clamav /var/run/clamav
EXPOSE 3310
CMD ["clamd", "--foreground=true"]
""")

d("weird-spacing", """FROM            alpine:3.18
   RUN     echo "indented instruction"
RUN\techo "tab separated"
ENV  KEY1=v1   KEY2="v 2"
CMD      [ "sh" , "-c" , "echo done" ]
""")

d("lowercase", """from ubuntu:22.04 as base
run echo "lowercase keywords are legal"
copy . /app
workdir /app
cmd ["./run.sh"]
""")

d("unicode-labels", """FROM alpine:3.19
# построение образа — сборочный этап
LABEL maintainer="José García <jose@example.com>"
LABEL description="Ünïcôde comments and labels ✓ 🐳"
RUN echo "café résumé naïve" > /tmp/accents.txt
CMD ["cat", "/tmp/accents.txt"]
""")

d("variable-shell", """FROM debian:bullseye
ENV APP_VERSION=2.4.1
RUN APP_URL="https://example.com/releases/v${APP_VERSION}.tar.gz" && \\
    echo "fetching $APP_URL" && \\
    curl -fsSL "$APP_URL" -o "/tmp/app-${APP_VERSION}.tar.gz" && \\
    tar -xzf "/tmp/app-${APP_VERSION}.tar.gz" -C /opt && \\
    rm "/tmp/app-${APP_VERSION}.tar.gz"
CMD ["/opt/app/bin/start"]
""")

d("compound-if", """FROM debian:bookworm
RUN if [ "$(uname -m)" = "x86_64" ]; then \\
        echo amd64 > /arch; \\
    elif [ "$(uname -m)" = "aarch64" ]; then \\
        echo arm64 > /arch; \\
    else \\
        echo unknown > /arch; \\
    fi
CMD ["cat", "/arch"]
""")

d("compound-for-case", """FROM alpine:3.18
RUN for pkg in curl jq git; do \\
        echo "want $pkg"; \\
    done && \\
    case "$TARGETARCH" in \\
        amd64) echo classic ;; \\
        *) echo exotic ;; \\
    esac
CMD ["sh"]
""")

d("subshell-pipes", """FROM debian:bullseye
RUN (cd /tmp && echo in-subshell) | tee /tmp/log 2>&1
RUN echo "$(date +%Y) build" >> /etc/build-info
RUN true && (echo grouped; echo statements) || echo fallback
CMD ["sh", "-c", "cat /etc/build-info"]
""")

d("ci-mixed", """FROM ubuntu:22.04
ENV DEBIAN_FRONTEND=noninteractive
RUN apt-get update && apt-get install -y --no-install-recommends \\
      python3 python3-pip nodejs npm \\
    && rm -rf /var/lib/apt/lists/*
RUN pip3 install --no-cache-dir tox coverage
RUN npm install -g --omit=dev eslint && npm cache clean --force
CMD ["tox"]
""")

d("pyenv-style", """FROM debian:bullseye
ENV PYENV_ROOT=/opt/pyenv
RUN set -eux; \\
    apt-get update; \\
    apt-get install -y --no-install-recommends \\
        make build-essential libssl-dev zlib1g-dev libbz2-dev \\
        libreadline-dev libsqlite3-dev curl ca-certificates; \\
    rm -rf /var/lib/apt/lists/*; \\
    curl -fsSL https://pyenv.run | bash; \\
    "$PYENV_ROOT/bin/pyenv" install 3.12.0; \\
    "$PYENV_ROOT/bin/pyenv" global 3.12.0
ENV PATH="$PYENV_ROOT/shims:$PYENV_ROOT/bin:$PATH"
CMD ["python", "--version"]
""")

d("nvm-style", """FROM ubuntu:20.04
ENV NVM_DIR=/usr/local/nvm NODE_VERSION=18.19.0
RUN mkdir -p "$NVM_DIR" \\
 && curl -o- https://raw.githubusercontent.com/nvm-sh/nvm/v0.39.7/install.sh | bash \\
 && . "$NVM_DIR/nvm.sh" \\
 && nvm install "$NODE_VERSION" \\
 && nvm alias default "$NODE_VERSION"
ENV PATH="$NVM_DIR/versions/node/v$NODE_VERSION/bin:$PATH"
CMD ["node"]
""")

d("jenkins-ish", """FROM eclipse-temurin:17-jre
ARG user=jenkins
ARG group=jenkins
ARG uid=1000
ARG gid=1000
RUN groupadd -g ${gid} ${group} \\
  && useradd -d /var/jenkins_home -u ${uid} -g ${gid} -m -s /bin/bash ${user}
VOLUME /var/jenkins_home
EXPOSE 8080 50000
USER ${user}
ENTRYPOINT ["/usr/bin/tini", "--", "/usr/local/bin/jenkins.sh"]
""")

d("two-liner", """FROM alpine
CMD ["true"]
""")

d("wild-unterminated", """FROM debian:bookworm
RUN echo "this quote never closes
CMD ["sh"]
""")

d("gpg-verify-flow", """FROM debian:bookworm-slim
RUN set -eux; \\
    wget -O tini "https://github.com/krallin/tini/releases/download/v0.19.0/tini-amd64"; \\
    wget -O tini.asc "https://github.com/krallin/tini/releases/download/v0.19.0/tini-amd64.asc"; \\
    export GNUPGHOME="$(mktemp -d)"; \\
    gpg --batch --keyserver hkps://keys.openpgp.org --recv-keys 6380DC428747F6C393FEACA59A84159D7001A4E5; \\
    gpg --batch --verify tini.asc tini; \\
    rm -rf "$GNUPGHOME" tini.asc; \\
    chmod +x tini; \\
    mv tini /usr/local/bin/
ENTRYPOINT ["/usr/local/bin/tini", "--"]
""")

d("shell-directive", """FROM ubuntu:22.04
SHELL ["/bin/bash", "-euxo", "pipefail", "-c"]
RUN echo good | tee /tmp/pipe-status
RUN declare -a arr=(one two); echo "${arr[@]}" > /tmp/arr || echo fallback
CMD ["/bin/bash"]
""")

d("healthcheck-none", """FROM postgres:16
HEALTHCHECK NONE
ENV POSTGRES_PASSWORD_FILE=/run/secrets/pgpass
COPY init.sql /docker-entrypoint-initdb.d/
""")

d("expose-udp", """FROM alpine:3.19
RUN apk add --no-cache dnsmasq
EXPOSE 53/udp 53/tcp
ENTRYPOINT ["dnsmasq", "-k"]
""")

d("workdir-relative", """FROM node:20
WORKDIR /opt
WORKDIR app
COPY . .
RUN npm ci && npm run build && npm cache clean --force
CMD ["npm", "start"]
""")

d("add-urls", """FROM ubuntu:22.04
ADD https://example.com/big-dataset.tar.gz /data/
ADD local-archive.tar.gz /opt/extracted/
RUN ls -la /data /opt/extracted
CMD ["bash"]
""")

d("user-switching", """FROM debian:bookworm
RUN useradd -m -s /bin/bash app
USER app
WORKDIR /home/app
COPY --chown=app:app . .
USER root
RUN chown -R app:app /home/app
USER app
CMD ["./start.sh"]
""")

d("empty-continuation", """FROM alpine:3.18
RUN echo first && \\
\\
    echo second
CMD ["sh"]
""")


def variants(base: dict[str, str]) -> dict[str, str]:
    out = dict(base)
    names = sorted(base)
    # CRLF endings: common on Windows checkouts
    for name in names[0:18]:
        out[f"{name}--crlf"] = base[name].replace("\n", "\r\n")
    # license headers: common in corporate repos
    header = (
        "# Copyright (c) Example Corp.\n"
        "# SPDX-License-Identifier: Apache-2.0\n\n"
    )
    for name in names[18:34]:
        out[f"{name}--header"] = header + base[name]
    # generous blank lines between instructions
    for name in names[34:46]:
        out[f"{name}--spaced"] = base[name].replace("\nFROM", "\n\nFROM").replace(
            "\nRUN", "\n\nRUN"
        )
    # tab indentation for continuation lines
    for name in names[46:]:
        out[f"{name}--tabs"] = base[name].replace("\n    ", "\n\t")
    # a file with no trailing newline at EOF
    out["two-liner--noeol"] = base["two-liner"].rstrip("\n")
    return out


def main(out_dir: str) -> None:
    os.makedirs(out_dir, exist_ok=True)
    corpus = variants(BASE)
    for name, content in sorted(corpus.items()):
        path = os.path.join(out_dir, f"{name}.Dockerfile")
        with open(path, "w", encoding="utf-8", newline="") as fh:
            fh.write(content)
    print(f"wrote {len(corpus)} files to {out_dir}")


if __name__ == "__main__":
    main(sys.argv[1] if len(sys.argv) > 1 else "tests/data/roundtrip")
