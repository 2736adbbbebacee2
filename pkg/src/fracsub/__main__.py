def main() -> None:
    from fracsub.application import Application

    Application().run()


if __name__ == "__main__":
    main()
