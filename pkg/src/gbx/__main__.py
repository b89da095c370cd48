from gbx.cli import main

main()
